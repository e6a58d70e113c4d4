import json

import pytest

from meros_verify import (
    DuplicateNameError,
    ModelSyntaxError,
    NameViolationError,
    NonMonotonicSeqError,
    parse_runtime_snapshot,
    parse_source_snapshot,
    parse_trace,
    serialize_runtime_snapshot,
    serialize_source_snapshot,
    serialize_trace,
)

from helpers import demo_snapshot_doc


def test_fixture_snapshot_is_canonical(snapshot_text, snapshot):
    assert serialize_runtime_snapshot(snapshot) == snapshot_text


def test_snapshot_round_trip():
    text = serialize_runtime_snapshot(parse_runtime_snapshot(json.dumps(demo_snapshot_doc())))
    assert serialize_runtime_snapshot(parse_runtime_snapshot(text)) == text


def test_snapshot_nodes_and_pairs_are_sorted():
    doc = demo_snapshot_doc()
    doc["nodes"].reverse()
    doc["nodes"][0]["publishers"].insert(0, ["/zzz", "std_msgs/msg/String"])
    snap = parse_runtime_snapshot(json.dumps(doc))
    fqns = [n.fqn for n in snap.nodes]
    assert fqns == sorted(fqns)
    chans = [c for c, _ in snap.nodes[1].publishers]
    assert chans == sorted(chans)


def test_duplicate_node_fqn_rejected():
    doc = demo_snapshot_doc()
    doc["nodes"].append(doc["nodes"][0])
    with pytest.raises(DuplicateNameError):
        parse_runtime_snapshot(json.dumps(doc))


def test_relative_fqn_rejected():
    doc = demo_snapshot_doc()
    doc["nodes"][0]["fqn"] = "talker"
    with pytest.raises(NameViolationError):
        parse_runtime_snapshot(json.dumps(doc))


def test_unknown_snapshot_key_rejected():
    doc = demo_snapshot_doc()
    doc["uptime"] = 3
    with pytest.raises(ModelSyntaxError):
        parse_runtime_snapshot(json.dumps(doc))


def test_source_snapshot_round_trip(sources_text, source_snapshot):
    assert serialize_source_snapshot(source_snapshot) == sources_text


def test_source_snapshot_duplicate_package_rejected():
    doc = {
        "workspaces": [
            {
                "name": "ws",
                "repositories": [
                    {"name": "a", "packages": ["pkg"]},
                    {"name": "b", "packages": ["pkg"]},
                ],
            }
        ]
    }
    with pytest.raises(DuplicateNameError):
        parse_source_snapshot(json.dumps(doc))


# ---------------------------------------------------------------------------
# event traces


def event_line(seq, channel="/demo/chatter", actor="talker", label="say hello"):
    return json.dumps(
        {"seq": seq, "channel_fqn": channel, "actor": actor, "label": label}
    )


def test_trace_round_trip(full_trace):
    text = serialize_trace(full_trace)
    assert serialize_trace(parse_trace(text)) == text
    assert [e.seq for e in full_trace.events] == list(range(1, 32))


def test_blank_lines_are_skipped():
    text = event_line(1) + "\n\n" + event_line(2) + "\n"
    trace = parse_trace(text)
    assert len(trace.events) == 2


def test_non_monotonic_seq_rejected():
    text = event_line(2) + "\n" + event_line(2)
    with pytest.raises(NonMonotonicSeqError):
        parse_trace(text)


def test_seq_must_be_integer():
    text = json.dumps(
        {"seq": "1", "channel_fqn": "/c", "actor": "a", "label": "l"}
    )
    with pytest.raises(ModelSyntaxError):
        parse_trace(text)


def test_missing_event_field_rejected():
    text = json.dumps({"seq": 1, "channel_fqn": "/c", "actor": "a"})
    with pytest.raises(ModelSyntaxError):
        parse_trace(text)


def test_extra_event_field_rejected():
    text = json.dumps(
        {"seq": 1, "channel_fqn": "/c", "actor": "a", "label": "l", "bonus": 1}
    )
    with pytest.raises(ModelSyntaxError):
        parse_trace(text)


def test_event_channel_must_be_absolute():
    text = json.dumps({"seq": 1, "channel_fqn": "chatter", "actor": "a", "label": "l"})
    with pytest.raises(NameViolationError):
        parse_trace(text)
