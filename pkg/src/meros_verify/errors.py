"""Exception types raised by parsers and verification operations."""

from __future__ import annotations


class VerifyError(Exception):
    """Base class for every error this package raises on purpose."""


class ModelSyntaxError(VerifyError):
    """Malformed document or a strict-schema violation (unknown or mistyped field)."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        if line is not None:
            message = f"{message} (line {line}, col {col})"
        super().__init__(message)


class DuplicateNameError(VerifyError):
    def __init__(self, path: str, message: str | None = None):
        self.path = path
        super().__init__(message or f"duplicate name at {path!r}")


class DanglingReferenceError(VerifyError):
    def __init__(self, path: str, target: str):
        self.path = path
        self.target = target
        super().__init__(f"{path!r} references unknown target {target!r}")


class NameViolationError(VerifyError):
    def __init__(self, name: str, reason: str = "does not match the name grammar"):
        self.name = name
        super().__init__(f"{name!r} {reason}")


class MissingNodeContextError(VerifyError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"private name {name!r} needs a node context to resolve")


class NonMonotonicSeqError(VerifyError):
    def __init__(self, seq: int, previous: int):
        self.seq = seq
        self.previous = previous
        super().__init__(f"trace seq {seq} does not increase over {previous}")


class UnknownScopeError(VerifyError):
    def __init__(self, scope: str):
        self.scope = scope
        super().__init__(f"scope {scope!r} does not name a system in the model")


class UnresolvedPartError(VerifyError):
    def __init__(self, plan_id: str, part: str):
        self.plan_id = plan_id
        self.part = part
        super().__init__(f"plan {plan_id!r} references unknown part {part!r}")


class CompositionCycleError(VerifyError):
    def __init__(self, path: str):
        self.path = path
        super().__init__(f"composition cycle through {path!r}")


class ForeignReportError(VerifyError):
    def __init__(self, scope: str):
        self.scope = scope
        super().__init__(f"report scope {scope!r} does not belong to the model")
