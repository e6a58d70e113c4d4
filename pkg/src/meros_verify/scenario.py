"""Validation plans and insertion-tolerant trace matching.

A plan either carries its own ordered steps or composes other plans by id.
Matching walks the trace once, binding each step to the earliest event that
fits it after the previous binding; unrelated events in between are ignored,
a vanished step fails the plan at that step's index.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping

from .errors import CompositionCycleError, UnresolvedPartError
from .report import Finding, FindingClass, Severity, Stage
from .snapshot import EventTrace, TraceEvent


class PlanStage(str, Enum):
    SUBSYSTEM = "subsystem"
    SYSTEM = "system"


@dataclass(frozen=True, slots=True)
class PlanStep:
    actor: str = ""
    label: str = ""
    channel: str | None = None
    activity: str | None = None


@dataclass(frozen=True, slots=True)
class ValidationPlan:
    id: str
    stage: PlanStage = PlanStage.SUBSYSTEM
    scope: str = ""
    steps: tuple[PlanStep, ...] = ()
    parts: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "steps", tuple(self.steps))
        object.__setattr__(self, "parts", tuple(self.parts))


@dataclass(frozen=True, slots=True)
class ScenarioResult:
    plan_id: str
    matched: bool
    matched_indices: tuple[int, ...]  # trace seq bound to each matched step
    first_failed_step: int | None
    findings: tuple[Finding, ...]


def _registry(plans: Iterable[ValidationPlan] | Mapping[str, ValidationPlan]) -> Mapping[str, ValidationPlan]:
    if isinstance(plans, Mapping):
        return plans
    return {p.id: p for p in plans}


def flatten_plan(
    plan: ValidationPlan,
    plans: Iterable[ValidationPlan] | Mapping[str, ValidationPlan] = (),
) -> tuple[PlanStep, ...]:
    """Expand part references depth-first into one ordered step sequence."""
    registry = _registry(plans)
    steps: list[PlanStep] = []

    def expand(p: ValidationPlan, trail: tuple[str, ...]) -> None:
        if p.id in trail:
            raise CompositionCycleError("/".join(trail + (p.id,)))
        if p.parts:
            for part in p.parts:
                child = registry.get(part)
                if child is None:
                    raise UnresolvedPartError(p.id, part)
                expand(child, trail + (p.id,))
        else:
            steps.extend(p.steps)

    expand(plan, ())
    return tuple(steps)


def _event_matches(step: PlanStep, event: TraceEvent) -> bool:
    if event.label.strip() != step.label.strip():
        return False
    if step.actor.strip() and event.actor.strip() != step.actor.strip():
        return False
    if step.channel is not None and event.channel_fqn != step.channel:
        return False
    return True


def match_trace(
    plan: ValidationPlan,
    trace: EventTrace,
    plans: Iterable[ValidationPlan] | Mapping[str, ValidationPlan] = (),
) -> ScenarioResult:
    """Match a plan against a trace; greedy, so the binding is the
    lexicographically smallest valid index assignment."""
    steps = flatten_plan(plan, plans)
    events = trace.events
    indices: list[int] = []
    position = 0
    for i, step in enumerate(steps):
        hit = None
        for j in range(position, len(events)):
            if _event_matches(step, events[j]):
                hit = j
                break
        if hit is None:
            seen_earlier = any(_event_matches(step, events[j]) for j in range(position))
            kind = (
                FindingClass.SCENARIO_ORDER_VIOLATION
                if seen_earlier
                else FindingClass.SCENARIO_STEP_MISSING
            )
            finding = Finding(
                stage=Stage.TRACE,
                severity=Severity.ERROR,
                kind=kind,
                subject=plan.scope or plan.id,
                expected=f"step[{i}] {step.actor or '*'}: {step.label}",
                observed=None,
            )
            return ScenarioResult(
                plan_id=plan.id,
                matched=False,
                matched_indices=tuple(indices),
                first_failed_step=i,
                findings=(finding,),
            )
        indices.append(events[hit].seq)
        position = hit + 1
    return ScenarioResult(
        plan_id=plan.id,
        matched=True,
        matched_indices=tuple(indices),
        first_failed_step=None,
        findings=(),
    )


def annotate_activities(
    result: ScenarioResult,
    plan: ValidationPlan,
    plans: Iterable[ValidationPlan] | Mapping[str, ValidationPlan] = (),
) -> list[tuple[str, bool]]:
    """Per activity tag, whether every step carrying it matched.

    Tags are reported in order of first appearance in the flattened steps.
    """
    steps = flatten_plan(plan, plans)
    matched_count = len(result.matched_indices)
    order: list[str] = []
    covered: dict[str, bool] = {}
    for i, step in enumerate(steps):
        if step.activity is None:
            continue
        if step.activity not in covered:
            order.append(step.activity)
            covered[step.activity] = True
        covered[step.activity] = covered[step.activity] and i < matched_count
    return [(tag, covered[tag]) for tag in order]


def result_to_dict(result: ScenarioResult) -> dict:
    return {
        "plan_id": result.plan_id,
        "matched": result.matched,
        "matched_indices": list(result.matched_indices),
        "first_failed_step": result.first_failed_step,
        "findings": [f.to_dict() for f in result.findings],
    }
