"""Design-versus-realization checks: graph diff, subsystem/system/source stages.

The expected communication graph is instantiated from the model (namespaces
applied, channel references resolved), the observed graph comes from a
runtime snapshot.  Conformance is set difference over nodes and endpoint
edges, with an allowlist policy for infrastructure noise.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

from .errors import UnknownScopeError
from .model import SystemModel, find_system, iter_channels, iter_endpoints, iter_nodes
from .names import namespace_prefix
from .report import Finding, FindingClass, Severity, Stage, VerificationReport, sort_findings
from .snapshot import RuntimeSnapshot, SourceSnapshot


class EdgeRole(str, Enum):
    PUB = "pub"
    SUB = "sub"
    SRV = "srv"
    CLI = "cli"
    ACT_SRV = "act_srv"
    ACT_CLI = "act_cli"


# runtime snapshot field name per role
_ROLE_SNAPSHOT_FIELDS = (
    (EdgeRole.PUB, "publishers"),
    (EdgeRole.SUB, "subscribers"),
    (EdgeRole.SRV, "services"),
    (EdgeRole.CLI, "clients"),
    (EdgeRole.ACT_SRV, "action_servers"),
    (EdgeRole.ACT_CLI, "action_clients"),
)


@dataclass(frozen=True, slots=True)
class Edge:
    node_fqn: str
    channel_fqn: str
    role: EdgeRole
    type: str = ""  # empty means unknown, matches anything
    external: bool = False

    def key(self) -> tuple[str, str, str]:
        return (self.node_fqn, self.channel_fqn, self.role.value)


@dataclass(frozen=True, slots=True)
class ExpectedGraph:
    scope: str
    nodes: frozenset[str]
    edges: frozenset[Edge]


DEFAULT_IGNORE_CHANNELS: tuple[str, ...] = ("/parameter_events", "/rosout", "~/*")


@dataclass(frozen=True, slots=True)
class MatchPolicy:
    """What the diff tolerates.

    Patterns are literal names or a single trailing-``*`` prefix; a leading
    ``~/`` stands for any known node's private namespace.
    """

    ignore_channels: tuple[str, ...] = DEFAULT_IGNORE_CHANNELS
    ignore_nodes: tuple[str, ...] = ()
    treat_unexpected_as: Severity = Severity.ERROR

    def with_ignores(self, channels=(), nodes=()) -> "MatchPolicy":
        return replace(
            self,
            ignore_channels=tuple(self.ignore_channels) + tuple(channels),
            ignore_nodes=tuple(self.ignore_nodes) + tuple(nodes),
        )


def _pattern_matches(pattern: str, value: str) -> bool:
    if pattern.endswith("*"):
        return value.startswith(pattern[:-1])
    return value == pattern


def _channel_ignored(fqn: str, patterns: tuple[str, ...], node_fqns: frozenset[str]) -> bool:
    for pattern in patterns:
        if pattern.startswith("~/"):
            rest = pattern[2:]
            for node in node_fqns:
                if fqn.startswith(node + "/") and _pattern_matches(rest, fqn[len(node) + 1 :]):
                    return True
        elif _pattern_matches(pattern, fqn):
            return True
    return False


def _node_ignored(fqn: str, patterns: tuple[str, ...]) -> bool:
    return any(_pattern_matches(p, fqn) for p in patterns)


def expected_graph(model: SystemModel, scope: str = "") -> ExpectedGraph:
    """Instantiate the design graph under ``scope`` ("" means the whole model).

    The model must be well-formed; unresolvable names make this raise.
    """
    if scope:
        if find_system(model, scope) is None:
            raise UnknownScopeError(scope)
        in_scope = lambda path: path == scope or path.startswith(scope + "/")
    else:
        in_scope = lambda path: True

    nodes = set()
    for node_path, _, fqn, _, _ in iter_nodes(model):
        if not in_scope(node_path):
            continue
        if fqn is None:
            raise UnknownScopeError(node_path)  # unreachable on a validated model
        nodes.add(fqn)

    edges = set()
    for ep in iter_endpoints(model):
        if not in_scope(ep.node_path):
            continue
        if ep.node_fqn is None or ep.channel_fqn is None:
            raise UnknownScopeError(ep.node_path)
        edges.add(
            Edge(
                node_fqn=ep.node_fqn,
                channel_fqn=ep.channel_fqn,
                role=EdgeRole(ep.role),
                type=ep.interface_type,
                external=ep.external,
            )
        )
    return ExpectedGraph(scope=scope, nodes=frozenset(nodes), edges=frozenset(edges))


def observed_edges(snapshot: RuntimeSnapshot) -> dict[tuple[str, str, str], str]:
    """Edge key to reported interface type, across the whole snapshot."""
    out: dict[tuple[str, str, str], str] = {}
    for node in snapshot.nodes:
        for role, attr in _ROLE_SNAPSHOT_FIELDS:
            for channel, type_ in getattr(node, attr):
                out[(node.fqn, channel, role.value)] = type_
    return out


def _edge_subject(key: tuple[str, str, str]) -> str:
    node_fqn, channel_fqn, role = key
    return f"{node_fqn} {role} {channel_fqn}"


def _diff_sets(
    expected_nodes: frozenset[str],
    expected_edge_types: dict[tuple[str, str, str], str],
    observed_nodes: frozenset[str],
    observed_edge_types: dict[tuple[str, str, str], str],
    policy: MatchPolicy,
    stage: Stage,
) -> list[Finding]:
    all_nodes = expected_nodes | observed_nodes
    exp_nodes = frozenset(n for n in expected_nodes if not _node_ignored(n, policy.ignore_nodes))
    obs_nodes = frozenset(n for n in observed_nodes if not _node_ignored(n, policy.ignore_nodes))

    def keep(key: tuple[str, str, str]) -> bool:
        node_fqn, channel_fqn, _ = key
        if _node_ignored(node_fqn, policy.ignore_nodes):
            return False
        return not _channel_ignored(channel_fqn, policy.ignore_channels, all_nodes)

    exp_edges = {k: t for k, t in expected_edge_types.items() if keep(k)}
    obs_edges = {k: t for k, t in observed_edge_types.items() if keep(k)}

    findings: list[Finding] = []
    for fqn in exp_nodes - obs_nodes:
        findings.append(
            Finding(stage=stage, severity=Severity.ERROR, kind=FindingClass.MISSING_NODE, subject=fqn)
        )
    for fqn in obs_nodes - exp_nodes:
        findings.append(
            Finding(
                stage=stage,
                severity=policy.treat_unexpected_as,
                kind=FindingClass.UNEXPECTED_NODE,
                subject=fqn,
            )
        )
    for key, type_ in exp_edges.items():
        if key not in obs_edges:
            findings.append(
                Finding(
                    stage=stage,
                    severity=Severity.ERROR,
                    kind=FindingClass.MISSING_EDGE,
                    subject=_edge_subject(key),
                    expected=type_ or None,
                )
            )
    for key, type_ in obs_edges.items():
        if key not in exp_edges:
            findings.append(
                Finding(
                    stage=stage,
                    severity=policy.treat_unexpected_as,
                    kind=FindingClass.UNEXPECTED_EDGE,
                    subject=_edge_subject(key),
                    observed=type_ or None,
                )
            )
    for key, exp_type in exp_edges.items():
        obs_type = obs_edges.get(key)
        if obs_type is None:
            continue
        if exp_type and exp_type != obs_type:
            findings.append(
                Finding(
                    stage=stage,
                    severity=Severity.ERROR,
                    kind=FindingClass.TYPE_MISMATCH,
                    subject=_edge_subject(key),
                    expected=exp_type,
                    observed=obs_type,
                )
            )
    return list(sort_findings(findings))


def diff_graphs(
    expected: ExpectedGraph,
    observed: RuntimeSnapshot,
    policy: MatchPolicy | None = None,
    stage: Stage = Stage.SRVE,
) -> list[Finding]:
    """Set difference between the expected graph and a snapshot."""
    policy = policy or MatchPolicy()
    expected_types = {e.key(): e.type for e in expected.edges}
    return _diff_sets(
        expected.nodes,
        expected_types,
        frozenset(n.fqn for n in observed.nodes),
        observed_edges(observed),
        policy,
        stage,
    )


def _policy_for(model: SystemModel, policy: MatchPolicy | None, default_unexpected: Severity) -> MatchPolicy:
    if policy is None:
        policy = MatchPolicy(treat_unexpected_as=default_unexpected)
    return policy.with_ignores(channels=model.ignore_channels)


def verify_subsystem(
    model: SystemModel,
    snapshot: RuntimeSnapshot,
    scope: str,
    policy: MatchPolicy | None = None,
) -> VerificationReport:
    """Check one subsystem against the snapshot.

    Only intra-subsystem channels count here: a channel participates when
    every design endpoint touching it belongs to the scope.  Channels that
    also connect nodes outside the scope are deferred to the system stage,
    and foreign observed nodes that the model expects elsewhere in the
    shared namespace are tolerated.
    """
    located = find_system(model, scope)
    if located is None:
        raise UnknownScopeError(scope)
    _, ns = located
    policy = _policy_for(model, policy, Severity.WARNING)

    full = expected_graph(model, "")
    scoped = expected_graph(model, scope)

    referents: dict[str, set[str]] = {}
    for edge in full.edges:
        referents.setdefault(edge.channel_fqn, set()).add(edge.node_fqn)
    considered = {
        fqn for fqn, nodes in referents.items() if nodes and nodes <= scoped.nodes
    }

    expected_types = {e.key(): e.type for e in scoped.edges if e.channel_fqn in considered}

    prefix = namespace_prefix(ns)
    foreign_known = full.nodes - scoped.nodes
    obs_nodes = set()
    obs_edge_types: dict[tuple[str, str, str], str] = {}
    for node in snapshot.nodes:
        if not node.fqn.startswith(prefix):
            continue
        if node.fqn in foreign_known:
            continue
        obs_nodes.add(node.fqn)
        for role, attr in _ROLE_SNAPSHOT_FIELDS:
            for channel, type_ in getattr(node, attr):
                if channel in considered:
                    obs_edge_types[(node.fqn, channel, role.value)] = type_

    findings = _diff_sets(
        scoped.nodes, expected_types, frozenset(obs_nodes), obs_edge_types, policy, Stage.SSRVE
    )
    return VerificationReport.build(Stage.SSRVE, scope, findings)


def verify_system(
    model: SystemModel,
    snapshot: RuntimeSnapshot,
    policy: MatchPolicy | None = None,
) -> VerificationReport:
    """Check the whole model against the whole snapshot.

    On top of the plain diff this flags design-internal conflicts: the same
    resolved channel name declared with different interface types.
    """
    policy = _policy_for(model, policy, Severity.ERROR)
    full = expected_graph(model, "")
    findings = list(diff_graphs(full, snapshot, policy, Stage.SRVE))

    declared: dict[str, list[tuple[str, str]]] = {}
    for ch_path, ch, fqn, _, _ in iter_channels(model):
        if fqn is not None:
            declared.setdefault(fqn, []).append((ch_path, ch.interface_type))
    for fqn, entries in declared.items():
        types = sorted({t for _, t in entries})
        if len(types) > 1:
            for other in types[1:]:
                findings.append(
                    Finding(
                        stage=Stage.SRVE,
                        severity=Severity.ERROR,
                        kind=FindingClass.TYPE_MISMATCH,
                        subject=fqn,
                        expected=types[0],
                        observed=other,
                    )
                )
    return VerificationReport.build(Stage.SRVE, "", findings)


def verify_sources(model: SystemModel, snapshot: SourceSnapshot) -> VerificationReport:
    """Compare the prescribed source layout against an observed source tree."""
    prescribed = model.sources.locations()
    actual: dict[str, tuple[str, str]] = {}
    for ws in snapshot.workspaces:
        for repo in ws.repositories:
            for pkg in repo.packages:
                actual[pkg] = (ws.name, repo.name)

    findings: list[Finding] = []
    for pkg, (ws, repo) in prescribed.items():
        if pkg not in actual:
            findings.append(
                Finding(
                    stage=Stage.SOURCES,
                    severity=Severity.ERROR,
                    kind=FindingClass.MISSING_PACKAGE,
                    subject=pkg,
                    expected=f"{ws}/{repo}",
                )
            )
        elif actual[pkg] != (ws, repo):
            findings.append(
                Finding(
                    stage=Stage.SOURCES,
                    severity=Severity.ERROR,
                    kind=FindingClass.MISPLACED_ARTIFACT,
                    subject=pkg,
                    expected=f"{ws}/{repo}",
                    observed="/".join(actual[pkg]),
                )
            )
    for pkg in sorted(set(actual) - set(prescribed)):
        findings.append(
            Finding(
                stage=Stage.SOURCES,
                severity=Severity.WARNING,
                kind=FindingClass.UNEXPECTED_PACKAGE,
                subject=pkg,
                observed="/".join(actual[pkg]),
            )
        )
    return VerificationReport.build(Stage.SOURCES, "", findings)
