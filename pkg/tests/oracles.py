"""Independent brute-force reference implementations used to cross-check
the library.  Everything here works on plain dicts and strings, on purpose:
no imports from the package under test.

Finding tuples have the shape (severity, class, subject, expected, observed).
"""

ROLE_FIELDS = [
    ("publishes", "pub"),
    ("subscribes", "sub"),
    ("serves", "srv"),
    ("calls", "cli"),
    ("action_servers", "act_srv"),
    ("action_clients", "act_cli"),
]

SNAPSHOT_ROLE_FIELDS = [
    ("publishers", "pub"),
    ("subscribers", "sub"),
    ("services", "srv"),
    ("clients", "cli"),
    ("action_servers", "act_srv"),
    ("action_clients", "act_cli"),
]

DEFAULT_IGNORES = ["/parameter_events", "/rosout", "~/*"]


def pattern_hit(pattern, value):
    if pattern.endswith("*"):
        return value.startswith(pattern[:-1])
    return value == pattern


def channel_dropped(channel, patterns, known_nodes):
    for pat in patterns:
        if pat.startswith("~/"):
            for node in known_nodes:
                prefix = node + "/"
                if channel.startswith(prefix) and pattern_hit(pat[2:], channel[len(prefix):]):
                    return True
        elif pattern_hit(pat, channel):
            return True
    return False


def node_dropped(node, patterns):
    for pat in patterns:
        if pattern_hit(pat, node):
            return True
    return False


def oracle_expected_graph(model_doc):
    """(node fqns, {(node, channel, role): type}) straight off the raw model
    document, with its own namespace bookkeeping."""
    nodes = set()
    edges = {}

    def join(ns, token):
        if ns == "/":
            return "/" + token
        return ns + "/" + token

    def walk(sysdoc, parent_ns, tables):
        ns = sysdoc.get("namespace") or parent_ns
        table = {}
        for ch in sysdoc.get("channels", []):
            cname = ch["channel_name"]
            fqn = cname if cname.startswith("/") else join(ns, cname)
            table[ch["name"]] = (fqn, ch["interface_type"])
        tables = tables + [table]
        for nd in sysdoc.get("nodes", []):
            node_fqn = join(ns, nd["name"])
            nodes.add(node_fqn)
            for field, role in ROLE_FIELDS:
                for ep in nd.get(field, []):
                    ref = ep["channel"]
                    resolved = None
                    for tbl in reversed(tables):
                        if ref in tbl:
                            resolved = tbl[ref]
                            break
                    if resolved is None:
                        fqn = ref if ref.startswith("/") else join(ns, ref)
                        resolved = (fqn, "")
                    edges[(node_fqn, resolved[0], role)] = resolved[1]
        for child in sysdoc.get("children", []):
            walk(child, ns, tables)

    for sysdoc in model_doc["systems"]:
        walk(sysdoc, "/", [])
    return nodes, edges


def oracle_observed_graph(snapshot_doc):
    nodes = set()
    edges = {}
    for nd in snapshot_doc["nodes"]:
        nodes.add(nd["fqn"])
        for field, role in SNAPSHOT_ROLE_FIELDS:
            for channel, type_ in nd.get(field, []):
                edges[(nd["fqn"], channel, role)] = type_
    return nodes, edges


def oracle_diff(
    expected_nodes,
    expected_edges,
    observed_nodes,
    observed_edges,
    ignore_channels=None,
    ignore_nodes=(),
    unexpected="error",
):
    """Plain symmetric difference with allowlist filtering."""
    if ignore_channels is None:
        ignore_channels = DEFAULT_IGNORES
    known = set(expected_nodes) | set(observed_nodes)

    def edge_kept(key):
        node, channel, _role = key
        if node_dropped(node, ignore_nodes):
            return False
        return not channel_dropped(channel, ignore_channels, known)

    exp_n = {n for n in expected_nodes if not node_dropped(n, ignore_nodes)}
    obs_n = {n for n in observed_nodes if not node_dropped(n, ignore_nodes)}
    exp_e = {k: v for k, v in expected_edges.items() if edge_kept(k)}
    obs_e = {k: v for k, v in observed_edges.items() if edge_kept(k)}

    def subject(key):
        return "%s %s %s" % (key[0], key[2], key[1])

    out = []
    for n in exp_n:
        if n not in obs_n:
            out.append(("error", "MissingNode", n, None, None))
    for n in obs_n:
        if n not in exp_n:
            out.append((unexpected, "UnexpectedNode", n, None, None))
    for k, t in exp_e.items():
        if k not in obs_e:
            out.append(("error", "MissingEdge", subject(k), t or None, None))
        elif t and obs_e[k] != t:
            out.append(("error", "TypeMismatch", subject(k), t, obs_e[k]))
    for k, t in obs_e.items():
        if k not in exp_e:
            out.append((unexpected, "UnexpectedEdge", subject(k), None, t or None))
    return sorted(out, key=lambda f: (f[1], f[2], f[0], f[3] or "", f[4] or ""))


def oracle_sources_diff(model_sources_doc, snapshot_doc):
    def locations(doc):
        out = {}
        for ws in doc.get("workspaces", []):
            for repo in ws.get("repositories", []):
                for pkg in repo.get("packages", []):
                    out[pkg] = ws["name"] + "/" + repo["name"]
        return out

    prescribed = locations(model_sources_doc)
    actual = locations(snapshot_doc)
    out = []
    for pkg, where in prescribed.items():
        if pkg not in actual:
            out.append(("error", "MissingPackage", pkg, where, None))
        elif actual[pkg] != where:
            out.append(("error", "MisplacedArtifact", pkg, where, actual[pkg]))
    for pkg, where in actual.items():
        if pkg not in prescribed:
            out.append(("warning", "UnexpectedPackage", pkg, None, where))
    return sorted(out, key=lambda f: (f[1], f[2], f[0], f[3] or "", f[4] or ""))


def oracle_resolve(name, namespace, node_fqn=None):
    """Name resolution by straightforward string surgery."""
    if name.startswith("~"):
        assert node_fqn is not None
        rest = name[1:]
        if rest.startswith("/"):
            rest = rest[1:]
        resolved = node_fqn + ("/" + rest if rest else "")
    elif name.startswith("/"):
        resolved = name
    else:
        resolved = (namespace.rstrip("/") or "") + "/" + name
    return resolved


def oracle_match(steps, events):
    """Greedy in-order subsequence match.

    steps: list of (actor, label, channel-or-None); events: list of
    (seq, channel, actor, label).  Returns (matched_seqs, failed_index,
    saw_one_earlier).
    """

    def hits(step, event):
        actor, label, channel = step
        _seq, ev_channel, ev_actor, ev_label = event
        if label.strip() != ev_label.strip():
            return False
        if actor.strip() and actor.strip() != ev_actor.strip():
            return False
        if channel is not None and channel != ev_channel:
            return False
        return True

    matched = []
    pos = 0
    for idx, step in enumerate(steps):
        found = None
        for j in range(pos, len(events)):
            if hits(step, events[j]):
                found = j
                break
        if found is None:
            earlier = any(hits(step, events[j]) for j in range(pos))
            return matched, idx, earlier
        matched.append(events[found][0])
        pos = found + 1
    return matched, None, False
