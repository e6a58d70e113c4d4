"""Command line front end.

Exit codes: 0 when verification passes (warnings allowed), 1 when any
error-severity finding is produced, 2 for usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from .conformance import MatchPolicy, verify_sources, verify_subsystem, verify_system
from .errors import VerifyError
from .model import SystemModel, iter_systems, parse_model, validate_model
from .report import Severity, Stage, VerificationReport
from .scenario import ScenarioResult, annotate_activities, match_trace, result_to_dict
from .snapshot import (
    EventTrace,
    RuntimeSnapshot,
    SourceSnapshot,
    parse_runtime_snapshot,
    parse_source_snapshot,
    parse_trace,
)
from .traceability import build_matrix, coverage_summary, matrix_to_dicts, render_matrix_text

_GREEN = "\033[32m"
_RED = "\033[31m"
_YELLOW = "\033[33m"
_RESET = "\033[0m"

STAGE_CHOICES = ("model", "ssrve", "srve", "sources", "trace", "all")


@dataclass
class Inputs:
    model: SystemModel
    snapshot: RuntimeSnapshot | None = None
    sources: SourceSnapshot | None = None
    trace: EventTrace | None = None


def _color_enabled(writes_to_file: bool) -> bool:
    mode = os.environ.get("MEROS_VERIFY_COLOR", "auto")
    if mode == "always":
        return True
    if mode == "never":
        return False
    return not writes_to_file and sys.stdout.isatty()


def _paint(text: str, color: str, enabled: bool) -> str:
    return f"{color}{text}{_RESET}" if enabled else text


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load_inputs(args: argparse.Namespace) -> Inputs:
    inputs = Inputs(model=parse_model(_read(args.model)))
    if getattr(args, "snapshot", None):
        inputs.snapshot = parse_runtime_snapshot(_read(args.snapshot))
    if getattr(args, "sources", None):
        inputs.sources = parse_source_snapshot(_read(args.sources))
    if getattr(args, "trace", None):
        inputs.trace = parse_trace(_read(args.trace))
    return inputs


def _policy(args: argparse.Namespace, unexpected: Severity) -> MatchPolicy:
    policy = MatchPolicy(treat_unexpected_as=unexpected)
    extra = getattr(args, "ignore", None) or ()
    return policy.with_ignores(channels=tuple(extra))


def _select_plans(model: SystemModel, plan_ids) -> list:
    if not plan_ids:
        return list(model.plans)
    by_id = {p.id: p for p in model.plans}
    selected = []
    for pid in plan_ids:
        if pid not in by_id:
            raise VerifyError(f"plan {pid!r} is not defined in the model")
        selected.append(by_id[pid])
    return selected


def _run_stage(
    stage: str, inputs: Inputs, args: argparse.Namespace
) -> tuple[list[VerificationReport], list[ScenarioResult]]:
    model = inputs.model
    reports: list[VerificationReport] = []
    results: list[ScenarioResult] = []
    if stage == "model":
        reports.append(VerificationReport.build(Stage.MODEL, "", validate_model(model)))
    elif stage == "ssrve":
        scopes = [args.scope] if getattr(args, "scope", None) else [p for p, _, _ in iter_systems(model)]
        for scope in scopes:
            reports.append(
                verify_subsystem(model, inputs.snapshot, scope, _policy(args, Severity.WARNING))
            )
    elif stage == "srve":
        reports.append(verify_system(model, inputs.snapshot, _policy(args, Severity.ERROR)))
    elif stage == "sources":
        reports.append(verify_sources(model, inputs.sources))
    elif stage == "trace":
        for plan in _select_plans(model, getattr(args, "plan", None)):
            results.append(match_trace(plan, inputs.trace, model.plans))
    return reports, results


_STAGE_NEEDS = {
    "model": (),
    "ssrve": ("snapshot",),
    "srve": ("snapshot",),
    "sources": ("sources",),
    "trace": ("trace",),
}


def _stages_for(args: argparse.Namespace, parser: argparse.ArgumentParser) -> list[str]:
    stage = getattr(args, "stage", "all")
    if stage != "all":
        for needed in _STAGE_NEEDS[stage]:
            if not getattr(args, needed, None):
                parser.error(f"--stage {stage} requires --{needed}")
        return [stage]
    stages = ["model"]
    if args.snapshot:
        stages += ["ssrve", "srve"]
    if args.sources:
        stages.append("sources")
    if getattr(args, "trace", None):
        stages.append("trace")
    return stages


def _exit_code(reports, results) -> int:
    findings = [f for r in reports for f in r.findings]
    findings += [f for r in results for f in r.findings]
    return 1 if any(f.severity is Severity.ERROR for f in findings) else 0


# ---------------------------------------------------------------------------
# rendering


def _findings_table(findings, color: bool) -> str:
    header = ("severity", "class", "subject", "expected", "observed")
    rows = [
        (f.severity.value, f.kind.value, f.subject, f.expected or "-", f.observed or "-")
        for f in findings
    ]
    widths = [max(len(r[i]) for r in [header] + rows) for i in range(len(header))]
    out = ["  ".join(h.ljust(widths[i]) for i, h in enumerate(header)).rstrip()]
    out.append("  ".join("-" * w for w in widths))
    for row in rows:
        line = "  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip()
        if color:
            line = _paint(line, _RED if row[0] == "error" else _YELLOW, True)
        out.append(line)
    return "\n".join(out)


def _render_report_text(report: VerificationReport, color: bool) -> str:
    banner = f"== {report.stage.value}{f': {report.scope}' if report.scope else ''} =="
    errors = sum(1 for f in report.findings if f.severity is Severity.ERROR)
    verdict = _paint("PASS", _GREEN, color) if report.passed else _paint("FAIL", _RED, color)
    lines = [banner, f"{verdict}  ({len(report.findings)} findings, {errors} errors)"]
    if report.findings:
        lines.append(_findings_table(report.findings, color))
    return "\n".join(lines) + "\n"


def _render_result_text(result: ScenarioResult, model: SystemModel, color: bool) -> str:
    plan = next(p for p in model.plans if p.id == result.plan_id)
    if result.matched:
        verdict = _paint("matched", _GREEN, color)
        line = f"plan {result.plan_id}: {verdict} ({len(result.matched_indices)} steps)"
    else:
        verdict = _paint("FAILED", _RED, color)
        line = f"plan {result.plan_id}: {verdict} at step {result.first_failed_step}"
    acts = annotate_activities(result, plan, model.plans)
    if acts:
        line += "\n  activities: " + "  ".join(
            f"{tag}={'ok' if ok else 'missed'}" for tag, ok in acts
        )
    if result.findings:
        line += "\n" + _findings_table(result.findings, color)
    return line + "\n"


def _json_dump(payload) -> str:
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def _emit(text: str, args: argparse.Namespace) -> None:
    if getattr(args, "out", None):
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommands


def _cmd_check_model(args, parser) -> int:
    inputs = _load_inputs(args)
    report = VerificationReport.build(Stage.MODEL, "", validate_model(inputs.model))
    if args.format == "json":
        _emit(_json_dump(report.to_dict()), args)
    else:
        _emit(_render_report_text(report, _color_enabled(bool(args.out))), args)
    return _exit_code([report], [])


def _cmd_verify(args, parser) -> int:
    stages = _stages_for(args, parser)
    inputs = _load_inputs(args)
    reports: list[VerificationReport] = []
    results: list[ScenarioResult] = []
    for stage in stages:
        r, s = _run_stage(stage, inputs, args)
        reports.extend(r)
        results.extend(s)
    if results:
        trace_findings = [f for res in results for f in res.findings]
        reports.append(VerificationReport.build(Stage.TRACE, "", trace_findings))
    if args.format == "json":
        payload = reports[0].to_dict() if len(reports) == 1 else {
            "reports": [r.to_dict() for r in reports]
        }
        _emit(_json_dump(payload), args)
    else:
        color = _color_enabled(bool(args.out))
        _emit("\n".join(_render_report_text(r, color) for r in reports), args)
    return _exit_code(reports, [])


def _cmd_validate(args, parser) -> int:
    if not args.trace:
        parser.error("validate requires --trace")
    inputs = _load_inputs(args)
    results = [
        match_trace(plan, inputs.trace, inputs.model.plans)
        for plan in _select_plans(inputs.model, args.plan)
    ]
    if args.format == "json":
        _emit(_json_dump({"results": [result_to_dict(r) for r in results]}), args)
    else:
        color = _color_enabled(bool(args.out))
        _emit("".join(_render_result_text(r, inputs.model, color) for r in results), args)
    return _exit_code([], results)


def _build_evidence(args, parser, inputs: Inputs):
    reports: list[VerificationReport] = []
    results: list[ScenarioResult] = []
    for stage in _stages_for(args, parser):
        r, s = _run_stage(stage, inputs, args)
        reports.extend(r)
        results.extend(s)
    return reports, results


def _cmd_matrix(args, parser) -> int:
    args.stage = "all"
    inputs = _load_inputs(args)
    reports, results = _build_evidence(args, parser, inputs)
    matrix = build_matrix(inputs.model, reports, results)
    if args.format == "json":
        payload = {"rows": matrix_to_dicts(matrix), "summary": coverage_summary(matrix)}
        _emit(_json_dump(payload), args)
    else:
        summary = coverage_summary(matrix)
        text = render_matrix_text(matrix, results)
        text += (
            "summary: "
            + "  ".join(f"{k}={v}" for k, v in summary.items())
            + "\n"
        )
        _emit(text, args)
    return _exit_code(reports, results)


def _cmd_all(args, parser) -> int:
    args.stage = "all"
    inputs = _load_inputs(args)
    reports, results = _build_evidence(args, parser, inputs)
    matrix = build_matrix(inputs.model, reports, results)
    summary = coverage_summary(matrix)
    if args.format == "json":
        payload = {
            "reports": [r.to_dict() for r in reports],
            "results": [result_to_dict(r) for r in results],
            "matrix": {"rows": matrix_to_dicts(matrix), "summary": summary},
        }
        _emit(_json_dump(payload), args)
    else:
        color = _color_enabled(bool(args.out))
        parts = [_render_report_text(r, color) for r in reports]
        if results:
            parts.append("".join(_render_result_text(r, inputs.model, color) for r in results))
        parts.append(render_matrix_text(matrix, results))
        parts.append("summary: " + "  ".join(f"{k}={v}" for k, v in summary.items()) + "\n")
        _emit("\n".join(parts), args)
    return _exit_code(reports, results)


# ---------------------------------------------------------------------------
# parser


def _add_io_options(sub: argparse.ArgumentParser, snapshot=False, sources=False, trace=False):
    sub.add_argument("--model", required=True, help="model document (JSON)")
    if snapshot:
        sub.add_argument("--snapshot", help="runtime snapshot (JSON)")
    if sources:
        sub.add_argument("--sources", help="source snapshot (JSON)")
    if trace:
        sub.add_argument("--trace", help="event trace (JSON Lines)")
    sub.add_argument("--format", choices=("text", "json"), default="text")
    sub.add_argument("--out", help="write the report here instead of stdout")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="meros-verify",
        description="Verify a realized ROS 2 system against its design model.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("check-model", help="well-formedness findings for the model itself")
    _add_io_options(p)
    p.set_defaults(func=_cmd_check_model)

    p = subs.add_parser("verify", help="diff design against runtime and source snapshots")
    _add_io_options(p, snapshot=True, sources=True, trace=True)
    p.add_argument("--stage", choices=STAGE_CHOICES, default="all")
    p.add_argument("--scope", help="system path to verify (ssrve), default: every system")
    p.add_argument("--plan", action="append", help="plan id for the trace stage (repeatable)")
    p.add_argument(
        "--ignore",
        action="append",
        metavar="PATTERN",
        help="extra channel allowlist pattern (repeatable)",
    )
    p.set_defaults(func=_cmd_verify)

    p = subs.add_parser("validate", help="match validation plans against an event trace")
    _add_io_options(p, trace=True)
    p.add_argument("--plan", action="append", help="plan id to match (repeatable), default: all")
    p.set_defaults(func=_cmd_validate)

    p = subs.add_parser("matrix", help="requirement traceability matrix")
    _add_io_options(p, snapshot=True, sources=True, trace=True)
    p.add_argument("--plan", action="append", help=argparse.SUPPRESS)
    p.add_argument("--ignore", action="append", metavar="PATTERN", help=argparse.SUPPRESS)
    p.set_defaults(func=_cmd_matrix)

    p = subs.add_parser("all", help="every stage plus the matrix")
    _add_io_options(p, snapshot=True, sources=True, trace=True)
    p.add_argument("--plan", action="append", help=argparse.SUPPRESS)
    p.add_argument("--ignore", action="append", metavar="PATTERN", help=argparse.SUPPRESS)
    p.set_defaults(func=_cmd_all)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except VerifyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
