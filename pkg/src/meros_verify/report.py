"""Finding and report vocabulary shared by every verification stage."""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Any


class Stage(str, Enum):
    MODEL = "model"
    SSRVE = "ssrve"
    SRVE = "srve"
    SOURCES = "sources"
    TRACE = "trace"


class Severity(str, Enum):
    ERROR = "error"
    WARNING = "warning"


class FindingClass(str, Enum):
    MISSING_NODE = "MissingNode"
    UNEXPECTED_NODE = "UnexpectedNode"
    MISSING_EDGE = "MissingEdge"
    UNEXPECTED_EDGE = "UnexpectedEdge"
    TYPE_MISMATCH = "TypeMismatch"
    MISPLACED_ARTIFACT = "MisplacedArtifact"
    MISSING_PACKAGE = "MissingPackage"
    UNEXPECTED_PACKAGE = "UnexpectedPackage"
    UNALLOCATED_REQUIREMENT = "UnallocatedRequirement"
    DANGLING_ALLOCATION = "DanglingAllocation"
    NAME_VIOLATION = "NameViolation"
    DUPLICATE_NAME = "DuplicateName"
    DANGLING_REFERENCE = "DanglingReference"
    SCENARIO_STEP_MISSING = "ScenarioStepMissing"
    SCENARIO_ORDER_VIOLATION = "ScenarioOrderViolation"


# Which finding classes may appear at which stage.  Construction enforces it.
STAGE_CLASSES: dict[Stage, frozenset[FindingClass]] = {
    Stage.MODEL: frozenset(
        {
            FindingClass.NAME_VIOLATION,
            FindingClass.DUPLICATE_NAME,
            FindingClass.UNALLOCATED_REQUIREMENT,
            FindingClass.DANGLING_ALLOCATION,
            FindingClass.DANGLING_REFERENCE,
        }
    ),
    Stage.SSRVE: frozenset(
        {
            FindingClass.MISSING_NODE,
            FindingClass.UNEXPECTED_NODE,
            FindingClass.MISSING_EDGE,
            FindingClass.UNEXPECTED_EDGE,
            FindingClass.TYPE_MISMATCH,
        }
    ),
    Stage.SRVE: frozenset(
        {
            FindingClass.MISSING_NODE,
            FindingClass.UNEXPECTED_NODE,
            FindingClass.MISSING_EDGE,
            FindingClass.UNEXPECTED_EDGE,
            FindingClass.TYPE_MISMATCH,
        }
    ),
    Stage.SOURCES: frozenset(
        {
            FindingClass.MISPLACED_ARTIFACT,
            FindingClass.MISSING_PACKAGE,
            FindingClass.UNEXPECTED_PACKAGE,
        }
    ),
    Stage.TRACE: frozenset(
        {
            FindingClass.SCENARIO_STEP_MISSING,
            FindingClass.SCENARIO_ORDER_VIOLATION,
        }
    ),
}


@dataclass(frozen=True, slots=True)
class Finding:
    stage: Stage
    severity: Severity
    kind: FindingClass  # serialized under the JSON key "class"
    subject: str
    expected: str | None = None
    observed: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in STAGE_CLASSES[self.stage]:
            raise ValueError(f"finding class {self.kind.value} not permitted at stage {self.stage.value}")

    def sort_key(self) -> tuple:
        return (
            self.stage.value,
            self.kind.value,
            self.subject,
            self.severity.value,
            self.expected or "",
            self.observed or "",
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "stage": self.stage.value,
            "severity": self.severity.value,
            "class": self.kind.value,
            "subject": self.subject,
            "expected": self.expected,
            "observed": self.observed,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "Finding":
        return cls(
            stage=Stage(data["stage"]),
            severity=Severity(data["severity"]),
            kind=FindingClass(data["class"]),
            subject=data["subject"],
            expected=data.get("expected"),
            observed=data.get("observed"),
        )


def sort_findings(findings) -> tuple[Finding, ...]:
    return tuple(sorted(findings, key=Finding.sort_key))


@dataclass(frozen=True, slots=True)
class VerificationReport:
    stage: Stage
    scope: str
    findings: tuple[Finding, ...]
    passed: bool

    def __post_init__(self) -> None:
        object.__setattr__(self, "findings", sort_findings(self.findings))
        has_error = any(f.severity is Severity.ERROR for f in self.findings)
        # passed is derived, never trusted from the caller
        object.__setattr__(self, "passed", not has_error)

    @classmethod
    def build(cls, stage: Stage, scope: str, findings) -> "VerificationReport":
        return cls(stage=stage, scope=scope, findings=tuple(findings), passed=True)

    def to_dict(self) -> dict[str, Any]:
        return {
            "stage": self.stage.value,
            "scope": self.scope,
            "pass": self.passed,
            "findings": [f.to_dict() for f in self.findings],
        }


def report_to_json(report: VerificationReport) -> str:
    return json.dumps(report.to_dict(), indent=2, ensure_ascii=False) + "\n"
