"""Small model documents shared across test modules."""

import copy
import json


def endpoint(channel, external=False):
    return {"channel": channel, "external": external}


def node_doc(name, **kw):
    doc = {
        "name": name,
        "kind": kw.pop("kind", "node"),
        "package": kw.pop("package", ""),
        "publishes": kw.pop("publishes", []),
        "subscribes": kw.pop("subscribes", []),
        "serves": kw.pop("serves", []),
        "calls": kw.pop("calls", []),
        "action_servers": kw.pop("action_servers", []),
        "action_clients": kw.pop("action_clients", []),
        "parameters": kw.pop("parameters", []),
    }
    assert not kw, kw
    return doc


def system_doc(name, namespace="", **kw):
    doc = {
        "name": name,
        "namespace": namespace,
        "children": kw.pop("children", []),
        "nodes": kw.pop("nodes", []),
        "channels": kw.pop("channels", []),
        "allocated_requirements": kw.pop("allocated_requirements", []),
    }
    assert not kw, kw
    return doc


def demo_doc():
    """One system, two nodes, one topic; everything resolves."""
    return {
        "model_name": "Demo",
        "systems": [
            system_doc(
                "Talker system",
                namespace="/demo",
                nodes=[
                    node_doc("talker", publishes=[endpoint("Chatter")]),
                    node_doc("listener", subscribes=[endpoint("Chatter")]),
                ],
                channels=[
                    {
                        "name": "Chatter",
                        "kind": "topic",
                        "channel_name": "chatter",
                        "interface_type": "std_msgs/msg/String",
                    }
                ],
                allocated_requirements=["R1"],
            )
        ],
        "requirements": [
            {"id": "R1", "text": "Talk", "parent": None, "allocations": ["Talker system"]}
        ],
        "hardware": [],
        "hardware_mappings": [],
        "sources": {"workspaces": []},
        "ignore_channels": [],
        "plans": [],
    }


def demo_text(mutate=None):
    doc = demo_doc()
    if mutate:
        mutate(doc)
    return json.dumps(doc)


def demo_snapshot_doc():
    return {
        "captured_at": "2025-01-01T00:00:00Z",
        "nodes": [
            {
                "fqn": "/demo/talker",
                "publishers": [["/demo/chatter", "std_msgs/msg/String"]],
                "subscribers": [],
                "services": [],
                "clients": [],
                "action_servers": [],
                "action_clients": [],
                "parameters": [],
            },
            {
                "fqn": "/demo/listener",
                "publishers": [],
                "subscribers": [["/demo/chatter", "std_msgs/msg/String"]],
                "services": [],
                "clients": [],
                "action_servers": [],
                "action_clients": [],
                "parameters": [],
            },
        ],
    }


def deep_copy(doc):
    return copy.deepcopy(doc)
