"""Design-side model: system hierarchy, channels, requirements, hardware, sources.

The document format is strict JSON: unknown fields are rejected, scalars are
strings and booleans.  Construction normalizes ordering (sibling collections
are sorted by name or id), so serialize followed by parse reproduces the
value exactly.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Any, Iterator

from .errors import (
    CompositionCycleError,
    DanglingReferenceError,
    DuplicateNameError,
    ModelSyntaxError,
)
from .names import is_token, is_valid_name, is_valid_namespace, resolve_name
from .report import Finding, FindingClass, Severity, Stage, sort_findings
from .scenario import PlanStage, PlanStep, ValidationPlan
from .snapshot import SourceRepository, SourceWorkspace, _load_json, _parse_source_tree


@dataclass(frozen=True, slots=True)
class EndpointDef:
    channel: str
    external: bool = False


@dataclass(frozen=True, slots=True)
class ParameterDef:
    name: str
    source: str


@dataclass(frozen=True, slots=True)
class CommChannelDef:
    name: str
    kind: str  # topic | service | action
    channel_name: str
    interface_type: str


def _sorted_endpoints(endpoints) -> tuple[EndpointDef, ...]:
    return tuple(sorted(endpoints, key=lambda e: (e.channel, e.external)))


@dataclass(frozen=True, slots=True)
class NodeDef:
    name: str
    kind: str = "node"  # node | micro_node
    package: str = ""
    publishes: tuple[EndpointDef, ...] = ()
    subscribes: tuple[EndpointDef, ...] = ()
    serves: tuple[EndpointDef, ...] = ()
    calls: tuple[EndpointDef, ...] = ()
    action_servers: tuple[EndpointDef, ...] = ()
    action_clients: tuple[EndpointDef, ...] = ()
    parameters: tuple[ParameterDef, ...] = ()

    def __post_init__(self) -> None:
        for attr in ENDPOINT_FIELDS:
            object.__setattr__(self, attr, _sorted_endpoints(getattr(self, attr)))
        object.__setattr__(
            self, "parameters", tuple(sorted(self.parameters, key=lambda p: (p.name, p.source)))
        )


@dataclass(frozen=True, slots=True)
class SystemDef:
    name: str
    namespace: str = ""  # absolute, or empty to inherit the parent's
    children: tuple["SystemDef", ...] = ()
    nodes: tuple[NodeDef, ...] = ()
    channels: tuple[CommChannelDef, ...] = ()
    allocated_requirements: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "children", tuple(sorted(self.children, key=lambda s: s.name)))
        object.__setattr__(self, "nodes", tuple(sorted(self.nodes, key=lambda n: n.name)))
        object.__setattr__(self, "channels", tuple(sorted(self.channels, key=lambda c: c.name)))
        object.__setattr__(
            self, "allocated_requirements", tuple(sorted(set(self.allocated_requirements)))
        )


@dataclass(frozen=True, slots=True)
class RequirementDef:
    id: str
    text: str = ""
    parent: str | None = None
    allocations: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "allocations", tuple(sorted(set(self.allocations))))


@dataclass(frozen=True, slots=True)
class HardwareDef:
    name: str
    links: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "links", tuple(sorted(set(self.links))))


@dataclass(frozen=True, slots=True)
class HardwareMapping:
    system: str
    hardware: str


@dataclass(frozen=True, slots=True)
class SourceLayout:
    workspaces: tuple[SourceWorkspace, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "workspaces", tuple(sorted(self.workspaces, key=lambda w: w.name)))

    def locations(self) -> dict[str, tuple[str, str]]:
        """Package name to (workspace, repository)."""
        out: dict[str, tuple[str, str]] = {}
        for ws in self.workspaces:
            for repo in ws.repositories:
                for pkg in repo.packages:
                    out[pkg] = (ws.name, repo.name)
        return out


@dataclass(frozen=True, slots=True)
class SystemModel:
    name: str
    systems: tuple[SystemDef, ...] = ()
    requirements: tuple[RequirementDef, ...] = ()
    hardware: tuple[HardwareDef, ...] = ()
    hardware_mappings: tuple[HardwareMapping, ...] = ()
    sources: SourceLayout = field(default_factory=SourceLayout)
    ignore_channels: tuple[str, ...] = ()
    plans: tuple[ValidationPlan, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "systems", tuple(sorted(self.systems, key=lambda s: s.name)))
        object.__setattr__(
            self, "requirements", tuple(sorted(self.requirements, key=lambda r: r.id))
        )
        object.__setattr__(
            self,
            "hardware_mappings",
            tuple(sorted(set(self.hardware_mappings), key=lambda m: (m.system, m.hardware))),
        )
        object.__setattr__(self, "ignore_channels", tuple(sorted(set(self.ignore_channels))))
        object.__setattr__(self, "plans", tuple(sorted(self.plans, key=lambda p: p.id)))
        # hardware links are symmetric: close them over the declared peers
        peer_map = {h.name: set(h.links) for h in self.hardware}
        for h in self.hardware:
            for peer in h.links:
                if peer in peer_map:
                    peer_map[peer].add(h.name)
        closed = tuple(
            HardwareDef(name=h.name, links=tuple(sorted(peer_map[h.name])))
            for h in sorted(self.hardware, key=lambda h: h.name)
        )
        object.__setattr__(self, "hardware", closed)


# model-side endpoint field name -> edge role tag
ENDPOINT_ROLES = (
    ("publishes", "pub"),
    ("subscribes", "sub"),
    ("serves", "srv"),
    ("calls", "cli"),
    ("action_servers", "act_srv"),
    ("action_clients", "act_cli"),
)
ENDPOINT_FIELDS = tuple(f for f, _ in ENDPOINT_ROLES)

_KIND_CATEGORY = {"topic": "msg", "service": "srv", "action": "action"}
_TYPE_RE = re.compile(r"^[A-Za-z][A-Za-z0-9_]*/(msg|srv|action)/[A-Za-z][A-Za-z0-9_]*$")


# ---------------------------------------------------------------------------
# traversal


def iter_systems(model: SystemModel) -> Iterator[tuple[str, SystemDef, str]]:
    """Pre-order walk yielding (path, system, effective namespace)."""

    def rec(sys_: SystemDef, parent_path: str, parent_ns: str):
        path = f"{parent_path}/{sys_.name}" if parent_path else sys_.name
        ns = sys_.namespace if sys_.namespace else parent_ns
        yield path, sys_, ns
        for child in sys_.children:
            yield from rec(child, path, ns)

    for top in model.systems:
        yield from rec(top, "", "/")


def iter_nodes(model: SystemModel) -> Iterator[tuple[str, NodeDef, str | None, str, str]]:
    """Yields (path, node, fqn or None, system path, namespace)."""
    for sys_path, sys_, ns in iter_systems(model):
        for node in sys_.nodes:
            fqn = None
            if is_valid_namespace(ns) and is_token(node.name):
                fqn = resolve_name(node.name, ns)
            yield f"{sys_path}/{node.name}", node, fqn, sys_path, ns


def iter_channels(model: SystemModel) -> Iterator[tuple[str, CommChannelDef, str | None, str, str]]:
    """Yields (path, channel, fqn or None, system path, namespace)."""
    for sys_path, sys_, ns in iter_systems(model):
        for ch in sys_.channels:
            fqn = None
            if (
                is_valid_namespace(ns)
                and is_valid_name(ch.channel_name)
                and not ch.channel_name.startswith("~")
            ):
                fqn = resolve_name(ch.channel_name, ns)
            yield f"{sys_path}/{ch.name}", ch, fqn, sys_path, ns


@dataclass(frozen=True, slots=True)
class ResolvedEndpoint:
    node_path: str
    node_fqn: str | None
    system_path: str
    role: str
    channel_ref: str
    channel_fqn: str | None
    interface_type: str
    external: bool
    channel_path: str | None  # None when the reference crosses the model boundary


def iter_endpoints(model: SystemModel) -> Iterator[ResolvedEndpoint]:
    """Every endpoint with its channel reference resolved lexically.

    A reference binds to the nearest enclosing system declaring a channel of
    that identifier; an external endpoint without such a declaration is taken
    as a raw channel name resolved in the node's own namespace, with an
    unknown interface type.
    """

    def rec(sys_: SystemDef, parent_path: str, parent_ns: str, chain: list[tuple[str, SystemDef, str]]):
        path = f"{parent_path}/{sys_.name}" if parent_path else sys_.name
        ns = sys_.namespace if sys_.namespace else parent_ns
        chain = chain + [(path, sys_, ns)]
        for node in sys_.nodes:
            node_path = f"{path}/{node.name}"
            node_fqn = None
            if is_valid_namespace(ns) and is_token(node.name):
                node_fqn = resolve_name(node.name, ns)
            for attr, role in ENDPOINT_ROLES:
                for ep in getattr(node, attr):
                    hit = None
                    for enc_path, enc, enc_ns in reversed(chain):
                        for ch in enc.channels:
                            if ch.name == ep.channel:
                                hit = (enc_path, ch, enc_ns)
                                break
                        if hit:
                            break
                    if hit is not None:
                        enc_path, ch, enc_ns = hit
                        fqn = None
                        if (
                            is_valid_namespace(enc_ns)
                            and is_valid_name(ch.channel_name)
                            and not ch.channel_name.startswith("~")
                        ):
                            fqn = resolve_name(ch.channel_name, enc_ns)
                        yield ResolvedEndpoint(
                            node_path=node_path,
                            node_fqn=node_fqn,
                            system_path=path,
                            role=role,
                            channel_ref=ep.channel,
                            channel_fqn=fqn,
                            interface_type=ch.interface_type,
                            external=ep.external,
                            channel_path=f"{enc_path}/{ch.name}",
                        )
                    else:
                        # unresolved: parse only allows this for external
                        # endpoints, whose reference is a raw channel name
                        fqn = None
                        if (
                            is_valid_namespace(ns)
                            and is_valid_name(ep.channel)
                            and not ep.channel.startswith("~")
                        ):
                            fqn = resolve_name(ep.channel, ns)
                        yield ResolvedEndpoint(
                            node_path=node_path,
                            node_fqn=node_fqn,
                            system_path=path,
                            role=role,
                            channel_ref=ep.channel,
                            channel_fqn=fqn,
                            interface_type="",
                            external=ep.external,
                            channel_path=None,
                        )
        for child in sys_.children:
            yield from rec(child, path, ns, chain)

    for top in model.systems:
        yield from rec(top, "", "/", [])


def element_paths(model: SystemModel) -> set[str]:
    paths = set()
    for path, _, _ in iter_systems(model):
        paths.add(path)
    for path, _, _, _, _ in iter_nodes(model):
        paths.add(path)
    for path, _, _, _, _ in iter_channels(model):
        paths.add(path)
    return paths


def find_system(model: SystemModel, path: str) -> tuple[SystemDef, str] | None:
    """The system at an element path, with its effective namespace."""
    for sys_path, sys_, ns in iter_systems(model):
        if sys_path == path:
            return sys_, ns
    return None


def path_of(model: SystemModel, element: Any) -> str:
    """Canonical slash-separated path of a system, node or channel."""
    for path, sys_, _ in iter_systems(model):
        if sys_ is element:
            return path
    for path, node, _, _, _ in iter_nodes(model):
        if node is element:
            return path
    for path, ch, _, _, _ in iter_channels(model):
        if ch is element:
            return path
    raise ValueError("element does not belong to this model")


# ---------------------------------------------------------------------------
# parsing


def _check_keys(obj: dict, allowed: tuple[str, ...], where: str) -> None:
    unknown = set(obj) - set(allowed)
    if unknown:
        raise ModelSyntaxError(f"unknown field {sorted(unknown)[0]!r} in {where}")


def _string(obj: dict, key: str, where: str, default: str | None = "") -> str:
    if key not in obj:
        if default is None:
            raise ModelSyntaxError(f"{where} misses required field {key!r}")
        return default
    value = obj[key]
    if not isinstance(value, str):
        raise ModelSyntaxError(f"{key} in {where} must be a string")
    return value


def _identifier(obj: dict, key: str, where: str) -> str:
    value = _string(obj, key, where, default=None)
    if not value or value != value.strip() or "/" in value:
        raise ModelSyntaxError(f"{key} {value!r} in {where} is not a plain identifier")
    return value


def _string_list(obj: dict, key: str, where: str) -> tuple[str, ...]:
    raw = obj.get(key, [])
    if not (isinstance(raw, list) and all(isinstance(x, str) for x in raw)):
        raise ModelSyntaxError(f"{key} in {where} must be an array of strings")
    return tuple(raw)


def _parse_endpoints(raw: Any, where: str) -> tuple[EndpointDef, ...]:
    if not isinstance(raw, list):
        raise ModelSyntaxError(f"{where} must be an array")
    out = []
    for item in raw:
        if not isinstance(item, dict):
            raise ModelSyntaxError(f"{where} entries must be objects")
        _check_keys(item, ("channel", "external"), where)
        channel = _string(item, "channel", where, default=None)
        if not channel:
            raise ModelSyntaxError(f"empty channel reference in {where}")
        external = item.get("external", False)
        if not isinstance(external, bool):
            raise ModelSyntaxError(f"external in {where} must be a boolean")
        out.append(EndpointDef(channel=channel, external=external))
    return tuple(out)


def _parse_node(raw: dict, where: str) -> NodeDef:
    _check_keys(
        raw,
        ("name", "kind", "package") + ENDPOINT_FIELDS + ("parameters",),
        where,
    )
    name = _identifier(raw, "name", where)
    kind = _string(raw, "kind", where, default="node")
    if kind not in ("node", "micro_node"):
        raise ModelSyntaxError(f"node kind {kind!r} in {where} must be node or micro_node")
    package = _string(raw, "package", where)
    params = []
    raw_params = raw.get("parameters", [])
    if not isinstance(raw_params, list):
        raise ModelSyntaxError(f"parameters in {where} must be an array")
    for p in raw_params:
        if not isinstance(p, dict):
            raise ModelSyntaxError(f"parameter entries in {where} must be objects")
        _check_keys(p, ("name", "source"), f"parameter of {where}")
        params.append(
            ParameterDef(
                name=_string(p, "name", where, default=None),
                source=_string(p, "source", where, default=None),
            )
        )
    endpoint_values = {
        attr: _parse_endpoints(raw.get(attr, []), f"{attr} of {where}") for attr in ENDPOINT_FIELDS
    }
    return NodeDef(name=name, kind=kind, package=package, parameters=tuple(params), **endpoint_values)


def _parse_channel(raw: dict, where: str) -> CommChannelDef:
    _check_keys(raw, ("name", "kind", "channel_name", "interface_type"), where)
    name = _identifier(raw, "name", where)
    kind = _string(raw, "kind", where, default=None)
    if kind not in _KIND_CATEGORY:
        raise ModelSyntaxError(f"channel kind {kind!r} in {where} must be topic, service or action")
    channel_name = _string(raw, "channel_name", where, default=None)
    interface_type = _string(raw, "interface_type", where, default=None)
    m = _TYPE_RE.match(interface_type)
    if not m:
        raise ModelSyntaxError(f"interface_type {interface_type!r} in {where} is not pkg/category/Type")
    if m.group(1) != _KIND_CATEGORY[kind]:
        raise ModelSyntaxError(
            f"interface_type {interface_type!r} in {where} does not match channel kind {kind!r}"
        )
    return CommChannelDef(name=name, kind=kind, channel_name=channel_name, interface_type=interface_type)


def _parse_system(raw: Any, parent_path: str) -> SystemDef:
    if not isinstance(raw, dict):
        raise ModelSyntaxError(f"system entries under {parent_path or 'the document root'} must be objects")
    _check_keys(
        raw,
        ("name", "namespace", "children", "nodes", "channels", "allocated_requirements"),
        f"system under {parent_path or 'the document root'}",
    )
    name = _identifier(raw, "name", f"system under {parent_path or 'the document root'}")
    path = f"{parent_path}/{name}" if parent_path else name
    namespace = _string(raw, "namespace", path)
    raw_children = raw.get("children", [])
    raw_nodes = raw.get("nodes", [])
    raw_channels = raw.get("channels", [])
    if not all(isinstance(x, list) for x in (raw_children, raw_nodes, raw_channels)):
        raise ModelSyntaxError(f"children, nodes and channels of {path} must be arrays")
    children = tuple(_parse_system(c, path) for c in raw_children)
    nodes = []
    for n in raw_nodes:
        if not isinstance(n, dict):
            raise ModelSyntaxError(f"node entries of {path} must be objects")
        nodes.append(_parse_node(n, f"node of {path}"))
    channels = []
    for c in raw_channels:
        if not isinstance(c, dict):
            raise ModelSyntaxError(f"channel entries of {path} must be objects")
        channels.append(_parse_channel(c, f"channel of {path}"))
    # one name pool per system keeps element paths injective
    seen: set[str] = set()
    for member in [c.name for c in children] + [n.name for n in nodes] + [c.name for c in channels]:
        if member in seen:
            raise DuplicateNameError(f"{path}/{member}")
        seen.add(member)
    return SystemDef(
        name=name,
        namespace=namespace,
        children=children,
        nodes=tuple(nodes),
        channels=tuple(channels),
        allocated_requirements=_string_list(raw, "allocated_requirements", path),
    )


def _parse_requirement(raw: Any) -> RequirementDef:
    if not isinstance(raw, dict):
        raise ModelSyntaxError("requirement entries must be objects")
    _check_keys(raw, ("id", "text", "parent", "allocations"), "requirement")
    rid = _identifier(raw, "id", "requirement")
    parent = raw.get("parent")
    if parent is not None and not isinstance(parent, str):
        raise ModelSyntaxError(f"parent of requirement {rid} must be a string or null")
    return RequirementDef(
        id=rid,
        text=_string(raw, "text", f"requirement {rid}"),
        parent=parent,
        allocations=_string_list(raw, "allocations", f"requirement {rid}"),
    )


def _parse_plan_step(raw: Any, where: str) -> PlanStep:
    if not isinstance(raw, dict):
        raise ModelSyntaxError(f"steps of {where} must be objects")
    _check_keys(raw, ("actor", "label", "channel", "activity"), f"step of {where}")
    label = _string(raw, "label", where, default=None)
    if not label.strip():
        raise ModelSyntaxError(f"a step of {where} has an empty label")
    channel = raw.get("channel")
    activity = raw.get("activity")
    if channel is not None and not isinstance(channel, str):
        raise ModelSyntaxError(f"channel of a step of {where} must be a string or null")
    if activity is not None and not isinstance(activity, str):
        raise ModelSyntaxError(f"activity of a step of {where} must be a string or null")
    return PlanStep(actor=_string(raw, "actor", where), label=label, channel=channel, activity=activity)


def _parse_plan(raw: Any) -> ValidationPlan:
    if not isinstance(raw, dict):
        raise ModelSyntaxError("plan entries must be objects")
    _check_keys(raw, ("id", "stage", "scope", "steps", "parts"), "plan")
    pid = _identifier(raw, "id", "plan")
    stage = _string(raw, "stage", f"plan {pid}", default="subsystem")
    if stage not in ("subsystem", "system"):
        raise ModelSyntaxError(f"plan {pid} stage must be subsystem or system")
    raw_steps = raw.get("steps", [])
    if not isinstance(raw_steps, list):
        raise ModelSyntaxError(f"steps of plan {pid} must be an array")
    steps = tuple(_parse_plan_step(s, f"plan {pid}") for s in raw_steps)
    parts = _string_list(raw, "parts", f"plan {pid}")
    if bool(steps) == bool(parts):
        raise ModelSyntaxError(f"plan {pid} must carry either steps or parts, not both or neither")
    return ValidationPlan(
        id=pid,
        stage=PlanStage(stage),
        scope=_string(raw, "scope", f"plan {pid}"),
        steps=steps,
        parts=parts,
    )


_TOP_KEYS = (
    "model_name",
    "systems",
    "requirements",
    "hardware",
    "hardware_mappings",
    "sources",
    "ignore_channels",
    "plans",
)


def parse_model(text: str) -> SystemModel:
    doc = _load_json(text, "model document")
    if not isinstance(doc, dict):
        raise ModelSyntaxError("model document must be a JSON object")
    _check_keys(doc, _TOP_KEYS, "model document")
    name = _string(doc, "model_name", "model document", default=None)
    if not name:
        raise ModelSyntaxError("model_name must be a non-empty string")

    raw_systems = doc.get("systems", [])
    if not isinstance(raw_systems, list):
        raise ModelSyntaxError("systems must be an array")
    systems = []
    top_names: set[str] = set()
    for raw in raw_systems:
        sys_ = _parse_system(raw, "")
        if sys_.name in top_names:
            raise DuplicateNameError(sys_.name)
        top_names.add(sys_.name)
        systems.append(sys_)

    raw_reqs = doc.get("requirements", [])
    if not isinstance(raw_reqs, list):
        raise ModelSyntaxError("requirements must be an array")
    requirements = []
    req_ids: set[str] = set()
    for raw in raw_reqs:
        req = _parse_requirement(raw)
        if req.id in req_ids:
            raise DuplicateNameError(req.id)
        req_ids.add(req.id)
        requirements.append(req)

    raw_hw = doc.get("hardware", [])
    if not isinstance(raw_hw, list):
        raise ModelSyntaxError("hardware must be an array")
    hardware = []
    hw_names: set[str] = set()
    for raw in raw_hw:
        if not isinstance(raw, dict):
            raise ModelSyntaxError("hardware entries must be objects")
        _check_keys(raw, ("name", "links"), "hardware")
        hname = _identifier(raw, "name", "hardware")
        if hname in hw_names:
            raise DuplicateNameError(hname)
        hw_names.add(hname)
        hardware.append(HardwareDef(name=hname, links=_string_list(raw, "links", f"hardware {hname}")))
    for h in hardware:
        for peer in h.links:
            if peer not in hw_names:
                raise DanglingReferenceError(h.name, peer)

    raw_maps = doc.get("hardware_mappings", [])
    if not isinstance(raw_maps, list):
        raise ModelSyntaxError("hardware_mappings must be an array")
    mappings = []
    for raw in raw_maps:
        if not isinstance(raw, dict):
            raise ModelSyntaxError("hardware_mappings entries must be objects")
        _check_keys(raw, ("system", "hardware"), "hardware_mapping")
        mappings.append(
            HardwareMapping(
                system=_string(raw, "system", "hardware_mapping", default=None),
                hardware=_string(raw, "hardware", "hardware_mapping", default=None),
            )
        )

    raw_sources = doc.get("sources", {"workspaces": []})
    sources = SourceLayout(workspaces=_parse_source_tree(raw_sources, "sources"))

    raw_plans = doc.get("plans", [])
    if not isinstance(raw_plans, list):
        raise ModelSyntaxError("plans must be an array")
    plans = []
    plan_ids: set[str] = set()
    for raw in raw_plans:
        plan = _parse_plan(raw)
        if plan.id in plan_ids:
            raise DuplicateNameError(plan.id)
        plan_ids.add(plan.id)
        plans.append(plan)

    model = SystemModel(
        name=name,
        systems=tuple(systems),
        requirements=tuple(requirements),
        hardware=tuple(hardware),
        hardware_mappings=tuple(mappings),
        sources=sources,
        ignore_channels=_string_list(doc, "ignore_channels", "model document"),
        plans=tuple(plans),
    )
    _check_references(model)
    return model


def _check_references(model: SystemModel) -> None:
    sys_paths = {path for path, _, _ in iter_systems(model)}

    for mapping in model.hardware_mappings:
        if mapping.system not in sys_paths:
            raise DanglingReferenceError("hardware_mappings", mapping.system)
        if mapping.hardware not in {h.name for h in model.hardware}:
            raise DanglingReferenceError("hardware_mappings", mapping.hardware)

    # endpoint channel references resolve lexically unless marked external
    for ep in iter_endpoints(model):
        if ep.channel_path is None and not ep.external:
            raise DanglingReferenceError(ep.node_path, ep.channel_ref)

    # node package references must exist when the model prescribes sources
    locations = model.sources.locations()
    if locations:
        for path, node, _, _, _ in iter_nodes(model):
            if node.package and node.package not in locations:
                raise DanglingReferenceError(path, node.package)

    # requirement parents: existing, acyclic
    req_by_id = {r.id: r for r in model.requirements}
    for req in model.requirements:
        if req.parent is not None and req.parent not in req_by_id:
            raise DanglingReferenceError(req.id, req.parent)
    for req in model.requirements:
        trail = []
        cur: RequirementDef | None = req
        seen: set[str] = set()
        while cur is not None and cur.parent is not None:
            if cur.id in seen:
                raise CompositionCycleError("/".join(trail + [cur.id]))
            seen.add(cur.id)
            trail.append(cur.id)
            cur = req_by_id.get(cur.parent)

    # plan part references, cycles and scopes
    plan_by_id = {p.id: p for p in model.plans}
    for plan in model.plans:
        for part in plan.parts:
            if part not in plan_by_id:
                raise DanglingReferenceError(plan.id, part)
        if plan.scope and plan.scope not in sys_paths:
            raise DanglingReferenceError(plan.id, plan.scope)

    def walk(pid: str, trail: tuple[str, ...]) -> None:
        if pid in trail:
            raise CompositionCycleError("/".join(trail + (pid,)))
        for part in plan_by_id[pid].parts:
            if part in plan_by_id:
                walk(part, trail + (pid,))

    for plan in model.plans:
        walk(plan.id, ())


# ---------------------------------------------------------------------------
# serialization


def _endpoint_to_dict(ep: EndpointDef) -> dict:
    return {"channel": ep.channel, "external": ep.external}


def _node_to_dict(node: NodeDef) -> dict:
    return {
        "name": node.name,
        "kind": node.kind,
        "package": node.package,
        "publishes": [_endpoint_to_dict(e) for e in node.publishes],
        "subscribes": [_endpoint_to_dict(e) for e in node.subscribes],
        "serves": [_endpoint_to_dict(e) for e in node.serves],
        "calls": [_endpoint_to_dict(e) for e in node.calls],
        "action_servers": [_endpoint_to_dict(e) for e in node.action_servers],
        "action_clients": [_endpoint_to_dict(e) for e in node.action_clients],
        "parameters": [{"name": p.name, "source": p.source} for p in node.parameters],
    }


def _system_to_dict(sys_: SystemDef) -> dict:
    return {
        "name": sys_.name,
        "namespace": sys_.namespace,
        "children": [_system_to_dict(c) for c in sys_.children],
        "nodes": [_node_to_dict(n) for n in sys_.nodes],
        "channels": [
            {
                "name": c.name,
                "kind": c.kind,
                "channel_name": c.channel_name,
                "interface_type": c.interface_type,
            }
            for c in sys_.channels
        ],
        "allocated_requirements": list(sys_.allocated_requirements),
    }


def _plan_to_dict(plan: ValidationPlan) -> dict:
    return {
        "id": plan.id,
        "stage": plan.stage.value,
        "scope": plan.scope,
        "steps": [
            {"actor": s.actor, "label": s.label, "channel": s.channel, "activity": s.activity}
            for s in plan.steps
        ],
        "parts": list(plan.parts),
    }


def serialize_model(model: SystemModel) -> str:
    doc = {
        "model_name": model.name,
        "systems": [_system_to_dict(s) for s in model.systems],
        "requirements": [
            {"id": r.id, "text": r.text, "parent": r.parent, "allocations": list(r.allocations)}
            for r in model.requirements
        ],
        "hardware": [{"name": h.name, "links": list(h.links)} for h in model.hardware],
        "hardware_mappings": [
            {"system": m.system, "hardware": m.hardware} for m in model.hardware_mappings
        ],
        "sources": {
            "workspaces": [
                {
                    "name": ws.name,
                    "repositories": [
                        {"name": r.name, "packages": list(r.packages)} for r in ws.repositories
                    ],
                }
                for ws in model.sources.workspaces
            ]
        },
        "ignore_channels": list(model.ignore_channels),
        "plans": [_plan_to_dict(p) for p in model.plans],
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# validation


def validate_model(model: SystemModel) -> list[Finding]:
    """Well-formedness findings; an empty list means the model is sound."""
    findings: list[Finding] = []

    def add(kind: FindingClass, subject: str, expected: str | None = None, observed: str | None = None):
        findings.append(
            Finding(
                stage=Stage.MODEL,
                severity=Severity.ERROR,
                kind=kind,
                subject=subject,
                expected=expected,
                observed=observed,
            )
        )

    paths = element_paths(model)
    for req in model.requirements:
        if not req.allocations:
            add(FindingClass.UNALLOCATED_REQUIREMENT, req.id)
        else:
            for alloc in req.allocations:
                if alloc not in paths:
                    add(FindingClass.DANGLING_ALLOCATION, req.id, observed=alloc)

    req_ids = {r.id for r in model.requirements}
    for sys_path, sys_, ns in iter_systems(model):
        for rid in sys_.allocated_requirements:
            if rid not in req_ids:
                add(FindingClass.DANGLING_REFERENCE, sys_path, observed=rid)
        if sys_.namespace and not is_valid_namespace(sys_.namespace):
            add(FindingClass.NAME_VIOLATION, sys_path, observed=sys_.namespace)

    for node_path, node, _, _, _ in iter_nodes(model):
        if not is_token(node.name):
            add(FindingClass.NAME_VIOLATION, node_path, observed=node.name)

    for ch_path, ch, _, _, _ in iter_channels(model):
        if not is_valid_name(ch.channel_name) or ch.channel_name.startswith("~"):
            add(FindingClass.NAME_VIOLATION, ch_path, observed=ch.channel_name)

    for ep in iter_endpoints(model):
        if ep.channel_path is None and (
            not is_valid_name(ep.channel_ref) or ep.channel_ref.startswith("~")
        ):
            add(FindingClass.NAME_VIOLATION, ep.node_path, observed=ep.channel_ref)

    first_seen: dict[str, str] = {}
    for node_path, _, fqn, _, _ in iter_nodes(model):
        if fqn is None:
            continue
        if fqn in first_seen:
            add(FindingClass.DUPLICATE_NAME, fqn, expected=first_seen[fqn], observed=node_path)
        else:
            first_seen[fqn] = node_path

    return list(sort_findings(findings))
