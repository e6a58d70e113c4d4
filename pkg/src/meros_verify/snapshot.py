"""Observed-side documents: runtime graph snapshots, source trees, event traces.

Parsing is strict (unknown fields are rejected) and pure: no file or
middleware access happens here, callers hand in document text.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterable

from .errors import (
    DuplicateNameError,
    ModelSyntaxError,
    NameViolationError,
    NonMonotonicSeqError,
)
from .names import is_valid_name

NamedPair = tuple[str, str]


def _normalize_fqn(value: str, where: str) -> str:
    """Strip trailing slashes and insist on an absolute, grammar-valid name."""
    name = value.rstrip("/") if value != "/" else value
    if not (is_valid_name(name) and name.startswith("/")):
        raise NameViolationError(value, f"in {where} is not an absolute name")
    return name


def _pairs(raw: Any, where: str) -> tuple[NamedPair, ...]:
    if not isinstance(raw, list):
        raise ModelSyntaxError(f"{where} must be an array of [name, type] pairs")
    out = []
    for item in raw:
        if not (isinstance(item, list) and len(item) == 2 and all(isinstance(x, str) for x in item)):
            raise ModelSyntaxError(f"{where} entries must be [name, type] string pairs")
        out.append((_normalize_fqn(item[0], where), item[1]))
    return tuple(sorted(out))


def _check_keys(obj: dict, allowed: Iterable[str], where: str) -> None:
    unknown = set(obj) - set(allowed)
    if unknown:
        raise ModelSyntaxError(f"unknown field {sorted(unknown)[0]!r} in {where}")


@dataclass(frozen=True, slots=True)
class RuntimeNode:
    fqn: str
    publishers: tuple[NamedPair, ...] = ()
    subscribers: tuple[NamedPair, ...] = ()
    services: tuple[NamedPair, ...] = ()
    clients: tuple[NamedPair, ...] = ()
    action_servers: tuple[NamedPair, ...] = ()
    action_clients: tuple[NamedPair, ...] = ()
    parameters: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        for attr in ("publishers", "subscribers", "services", "clients", "action_servers", "action_clients"):
            object.__setattr__(self, attr, tuple(sorted(tuple(p) for p in getattr(self, attr))))
        object.__setattr__(self, "parameters", tuple(sorted(self.parameters)))


@dataclass(frozen=True, slots=True)
class RuntimeSnapshot:
    captured_at: str = ""
    nodes: tuple[RuntimeNode, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", tuple(sorted(self.nodes, key=lambda n: n.fqn)))


_NODE_KEYS = (
    "fqn",
    "publishers",
    "subscribers",
    "services",
    "clients",
    "action_servers",
    "action_clients",
    "parameters",
)


def parse_runtime_snapshot(text: str) -> RuntimeSnapshot:
    doc = _load_json(text, "runtime snapshot")
    if not isinstance(doc, dict):
        raise ModelSyntaxError("runtime snapshot must be a JSON object")
    _check_keys(doc, ("captured_at", "nodes"), "runtime snapshot")
    captured_at = doc.get("captured_at", "")
    if not isinstance(captured_at, str):
        raise ModelSyntaxError("captured_at must be a string")
    raw_nodes = doc.get("nodes", [])
    if not isinstance(raw_nodes, list):
        raise ModelSyntaxError("nodes must be an array")
    nodes = []
    seen: set[str] = set()
    for raw in raw_nodes:
        if not isinstance(raw, dict):
            raise ModelSyntaxError("node entries must be objects")
        _check_keys(raw, _NODE_KEYS, "runtime node")
        if not isinstance(raw.get("fqn"), str):
            raise ModelSyntaxError("runtime node needs a string fqn")
        fqn = _normalize_fqn(raw["fqn"], "runtime node fqn")
        if fqn in seen:
            raise DuplicateNameError(fqn)
        seen.add(fqn)
        params = raw.get("parameters", [])
        if not (isinstance(params, list) and all(isinstance(p, str) for p in params)):
            raise ModelSyntaxError(f"parameters of {fqn} must be an array of strings")
        nodes.append(
            RuntimeNode(
                fqn=fqn,
                publishers=_pairs(raw.get("publishers", []), f"{fqn} publishers"),
                subscribers=_pairs(raw.get("subscribers", []), f"{fqn} subscribers"),
                services=_pairs(raw.get("services", []), f"{fqn} services"),
                clients=_pairs(raw.get("clients", []), f"{fqn} clients"),
                action_servers=_pairs(raw.get("action_servers", []), f"{fqn} action_servers"),
                action_clients=_pairs(raw.get("action_clients", []), f"{fqn} action_clients"),
                parameters=tuple(params),
            )
        )
    return RuntimeSnapshot(captured_at=captured_at, nodes=tuple(nodes))


def serialize_runtime_snapshot(snapshot: RuntimeSnapshot) -> str:
    doc = {
        "captured_at": snapshot.captured_at,
        "nodes": [
            {
                "fqn": n.fqn,
                "publishers": [list(p) for p in n.publishers],
                "subscribers": [list(p) for p in n.subscribers],
                "services": [list(p) for p in n.services],
                "clients": [list(p) for p in n.clients],
                "action_servers": [list(p) for p in n.action_servers],
                "action_clients": [list(p) for p in n.action_clients],
                "parameters": list(n.parameters),
            }
            for n in snapshot.nodes
        ],
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


@dataclass(frozen=True, slots=True)
class SourceRepository:
    name: str
    packages: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "packages", tuple(sorted(self.packages)))


@dataclass(frozen=True, slots=True)
class SourceWorkspace:
    name: str
    repositories: tuple[SourceRepository, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "repositories", tuple(sorted(self.repositories, key=lambda r: r.name)))


@dataclass(frozen=True, slots=True)
class SourceSnapshot:
    workspaces: tuple[SourceWorkspace, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "workspaces", tuple(sorted(self.workspaces, key=lambda w: w.name)))


def _parse_source_tree(doc: Any, what: str) -> tuple[SourceWorkspace, ...]:
    if not isinstance(doc, dict):
        raise ModelSyntaxError(f"{what} must be a JSON object")
    _check_keys(doc, ("workspaces",), what)
    raw_ws = doc.get("workspaces", [])
    if not isinstance(raw_ws, list):
        raise ModelSyntaxError("workspaces must be an array")
    workspaces = []
    ws_names: set[str] = set()
    pkg_seen: set[str] = set()
    for ws in raw_ws:
        if not isinstance(ws, dict):
            raise ModelSyntaxError("workspace entries must be objects")
        _check_keys(ws, ("name", "repositories"), "workspace")
        name = ws.get("name")
        if not isinstance(name, str) or not name:
            raise ModelSyntaxError("workspace needs a non-empty string name")
        if name in ws_names:
            raise DuplicateNameError(name)
        ws_names.add(name)
        repos = []
        repo_names: set[str] = set()
        for repo in ws.get("repositories", []):
            if not isinstance(repo, dict):
                raise ModelSyntaxError("repository entries must be objects")
            _check_keys(repo, ("name", "packages"), "repository")
            rname = repo.get("name")
            if not isinstance(rname, str) or not rname:
                raise ModelSyntaxError("repository needs a non-empty string name")
            if rname in repo_names:
                raise DuplicateNameError(f"{name}/{rname}")
            repo_names.add(rname)
            pkgs = repo.get("packages", [])
            if not (isinstance(pkgs, list) and all(isinstance(p, str) and p for p in pkgs)):
                raise ModelSyntaxError(f"packages of {rname} must be non-empty strings")
            for p in pkgs:
                # package names are unique across the whole tree
                if p in pkg_seen:
                    raise DuplicateNameError(p)
                pkg_seen.add(p)
            repos.append(SourceRepository(name=rname, packages=tuple(pkgs)))
        workspaces.append(SourceWorkspace(name=name, repositories=tuple(repos)))
    return tuple(workspaces)


def parse_source_snapshot(text: str) -> SourceSnapshot:
    doc = _load_json(text, "source snapshot")
    return SourceSnapshot(workspaces=_parse_source_tree(doc, "source snapshot"))


def serialize_source_snapshot(snapshot: SourceSnapshot) -> str:
    doc = {
        "workspaces": [
            {
                "name": ws.name,
                "repositories": [
                    {"name": r.name, "packages": list(r.packages)} for r in ws.repositories
                ],
            }
            for ws in snapshot.workspaces
        ]
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


@dataclass(frozen=True, slots=True)
class TraceEvent:
    seq: int
    channel_fqn: str
    actor: str
    label: str


@dataclass(frozen=True, slots=True)
class EventTrace:
    events: tuple[TraceEvent, ...] = field(default=())


_EVENT_KEYS = ("seq", "channel_fqn", "actor", "label")


def parse_trace(text: str) -> EventTrace:
    """Parse a JSON Lines trace; seq values must strictly increase."""
    events = []
    previous: int | None = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            raw = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ModelSyntaxError(f"bad trace line: {exc.msg}", lineno, exc.colno) from exc
        if not isinstance(raw, dict):
            raise ModelSyntaxError("trace lines must be objects", lineno, 1)
        _check_keys(raw, _EVENT_KEYS, f"trace line {lineno}")
        missing = [k for k in _EVENT_KEYS if k not in raw]
        if missing:
            raise ModelSyntaxError(f"trace line {lineno} misses field {missing[0]!r}", lineno, 1)
        seq = raw["seq"]
        if not isinstance(seq, int) or isinstance(seq, bool):
            raise ModelSyntaxError("seq must be an integer", lineno, 1)
        if not all(isinstance(raw[k], str) for k in ("channel_fqn", "actor", "label")):
            raise ModelSyntaxError("channel_fqn, actor and label must be strings", lineno, 1)
        if previous is not None and seq <= previous:
            raise NonMonotonicSeqError(seq, previous)
        previous = seq
        events.append(
            TraceEvent(
                seq=seq,
                channel_fqn=_normalize_fqn(raw["channel_fqn"], f"trace line {lineno}"),
                actor=raw["actor"],
                label=raw["label"],
            )
        )
    return EventTrace(events=tuple(events))


def serialize_trace(trace: EventTrace) -> str:
    lines = [
        json.dumps(
            {"seq": e.seq, "channel_fqn": e.channel_fqn, "actor": e.actor, "label": e.label},
            ensure_ascii=False,
        )
        for e in trace.events
    ]
    return "\n".join(lines) + ("\n" if lines else "")


def _load_json(text: str, what: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelSyntaxError(f"bad {what}: {exc.msg}", exc.lineno, exc.colno) from exc
