"""Requirement traceability: who verifies what, and did it pass.

A requirement row aggregates evidence per verification stage.  Findings are
tied back to requirements through their subjects: fully qualified names map
to model element paths, package names map to the nodes built from them, and
a finding counts against a requirement when a mapped path lies at or under
one of its allocated paths.  Evidence never flows upward from a child
requirement to its parent.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .errors import ForeignReportError
from .model import SystemModel, element_paths, iter_channels, iter_nodes, iter_systems
from .report import Finding, Severity, Stage, VerificationReport
from .scenario import ScenarioResult

MATRIX_STAGES = (Stage.SSRVE, Stage.SRVE, Stage.SOURCES, Stage.TRACE)


class RowStatus(str, Enum):
    UNVERIFIED = "unverified"
    PASS = "pass"
    FAIL = "fail"


@dataclass(frozen=True, slots=True)
class TraceRow:
    requirement_id: str
    text: str
    allocated_paths: tuple[str, ...]
    ssrve: RowStatus
    srve: RowStatus
    sources: RowStatus
    trace: RowStatus
    scenario_refs: tuple[str, ...]

    def status(self, stage: Stage) -> RowStatus:
        return getattr(self, stage.value)


@dataclass(frozen=True, slots=True)
class TraceabilityMatrix:
    rows: tuple[TraceRow, ...]


class _SubjectIndex:
    """Maps finding subjects onto model element paths."""

    def __init__(self, model: SystemModel):
        self.paths = element_paths(model)
        self.fqn_paths: dict[str, list[str]] = {}
        self.package_paths: dict[str, list[str]] = {}
        for path, node, fqn, _, _ in iter_nodes(model):
            if fqn is not None:
                self.fqn_paths.setdefault(fqn, []).append(path)
            if node.package:
                self.package_paths.setdefault(node.package, []).append(path)
        for path, _, fqn, _, _ in iter_channels(model):
            if fqn is not None:
                self.fqn_paths.setdefault(fqn, []).append(path)

    def finding_paths(self, finding: Finding) -> set[str]:
        mapped: set[str] = set()
        if finding.subject in self.paths:
            mapped.add(finding.subject)
        for token in finding.subject.split():
            if token.startswith("/"):
                mapped.update(self.fqn_paths.get(token, ()))
        if finding.stage is Stage.SOURCES:
            mapped.update(self.package_paths.get(finding.subject, ()))
        return mapped


def _under(path: str, ancestor: str) -> bool:
    return path == ancestor or path.startswith(ancestor + "/")


def _touches(scope: str, path: str) -> bool:
    # empty scope spans the whole model
    return scope == "" or _under(scope, path) or _under(path, scope)


def _covers(report: VerificationReport, stage: Stage, alloc: str) -> bool:
    """A passed report at this stage whose scope contains the allocated path."""
    if report.stage is not stage or not report.passed:
        return False
    return report.scope == "" or _under(alloc, report.scope)


def build_matrix(
    model: SystemModel,
    reports: Sequence[VerificationReport] = (),
    scenario_results: Sequence[ScenarioResult] = (),
) -> TraceabilityMatrix:
    """One row per requirement, in the model's requirement order."""
    system_paths = {path for path, _, _ in iter_systems(model)}
    for report in reports:
        if report.scope and report.scope not in system_paths:
            raise ForeignReportError(report.scope)

    index = _SubjectIndex(model)
    plans = {p.id: p for p in model.plans}
    results = {r.plan_id: r for r in scenario_results}

    stage_findings: dict[Stage, list[Finding]] = {s: [] for s in MATRIX_STAGES}
    for report in reports:
        for finding in report.findings:
            if finding.stage in stage_findings:
                stage_findings[finding.stage].append(finding)
    for result in scenario_results:
        for finding in result.findings:
            if finding.stage in stage_findings:
                stage_findings[finding.stage].append(finding)

    rows = []
    for req in model.requirements:
        allocations = req.allocations

        def hit(finding: Finding) -> bool:
            return any(
                _under(mapped, alloc)
                for mapped in index.finding_paths(finding)
                for alloc in allocations
            )

        statuses: dict[Stage, RowStatus] = {}
        for stage in (Stage.SSRVE, Stage.SRVE, Stage.SOURCES):
            failed = any(
                f.severity is Severity.ERROR and hit(f) for f in stage_findings[stage]
            )
            if failed:
                statuses[stage] = RowStatus.FAIL
                continue
            covered = bool(allocations) and all(
                any(_covers(r, stage, alloc) for r in reports) for alloc in allocations
            )
            statuses[stage] = RowStatus.PASS if covered else RowStatus.UNVERIFIED

        refs = tuple(
            sorted(pid for pid, plan in plans.items() if allocations and any(_touches(plan.scope, a) for a in allocations))
        )
        trace_failed = any(
            f.severity is Severity.ERROR and hit(f) for f in stage_findings[Stage.TRACE]
        )
        if trace_failed:
            trace_status = RowStatus.FAIL
        elif refs and all(pid in results and results[pid].matched for pid in refs):
            trace_status = RowStatus.PASS
        else:
            trace_status = RowStatus.UNVERIFIED

        rows.append(
            TraceRow(
                requirement_id=req.id,
                text=req.text,
                allocated_paths=allocations,
                ssrve=statuses[Stage.SSRVE],
                srve=statuses[Stage.SRVE],
                sources=statuses[Stage.SOURCES],
                trace=trace_status,
                scenario_refs=refs,
            )
        )
    return TraceabilityMatrix(rows=tuple(rows))


def coverage_summary(matrix: TraceabilityMatrix) -> dict[str, int]:
    total = len(matrix.rows)
    allocated = sum(1 for r in matrix.rows if r.allocated_paths)
    failed = sum(
        1
        for r in matrix.rows
        if any(r.status(s) is RowStatus.FAIL for s in MATRIX_STAGES)
    )
    passed = sum(
        1
        for r in matrix.rows
        if not any(r.status(s) is RowStatus.FAIL for s in MATRIX_STAGES)
        and any(r.status(s) is RowStatus.PASS for s in MATRIX_STAGES)
    )
    return {
        "total": total,
        "allocated": allocated,
        "verified_pass": passed,
        "verified_fail": failed,
        "unverified": total - passed - failed,
    }


def matrix_to_dicts(matrix: TraceabilityMatrix) -> list[dict]:
    return [
        {
            "requirement_id": r.requirement_id,
            "text": r.text,
            "allocated_paths": list(r.allocated_paths),
            "ssrve": r.ssrve.value,
            "srve": r.srve.value,
            "sources": r.sources.value,
            "trace": r.trace.value,
            "scenario_refs": list(r.scenario_refs),
        }
        for r in matrix.rows
    ]


def render_matrix_text(matrix: TraceabilityMatrix, results: Iterable[ScenarioResult] = ()) -> str:
    """Fixed-width table: id, text, allocations, ssrve, srve, sources, scenarios."""
    outcome = {r.plan_id: r.matched for r in results}

    def scenario_cell(row: TraceRow) -> str:
        if not row.scenario_refs:
            return "-"
        marks = []
        for pid in row.scenario_refs:
            if pid not in outcome:
                marks.append(f"{pid}:-")
            else:
                marks.append(f"{pid}:{'ok' if outcome[pid] else 'FAIL'}")
        return ",".join(marks)

    header = ("id", "text", "allocations", "ssrve", "srve", "sources", "scenarios")
    body = [
        (
            r.requirement_id,
            r.text,
            "; ".join(r.allocated_paths) or "-",
            r.ssrve.value,
            r.srve.value,
            r.sources.value,
            scenario_cell(r),
        )
        for r in matrix.rows
    ]
    widths = [max(len(row[i]) for row in [header] + body) for i in range(len(header))]
    lines = []
    lines.append("  ".join(h.ljust(widths[i]) for i, h in enumerate(header)).rstrip())
    lines.append("  ".join("-" * w for w in widths))
    for row in body:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
    return "\n".join(lines) + "\n"
