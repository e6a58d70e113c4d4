"""ROS name grammar and namespace resolution.

A name is ``(~|/)? token ('/' token)*`` where a token starts with a letter
and continues with letters, digits or underscores.  Three flavours exist:

* absolute, starting with ``/`` (``/magician1/aruco_node``),
* relative, no leading separator (``aruco_node``, ``color/image_raw``),
* private, starting with ``~`` (``~status``), meaningful only for a node.

Resolution always yields an absolute name with no empty segments and no
trailing slash, and is idempotent on already-absolute input.
"""

from __future__ import annotations

import re

from .errors import MissingNodeContextError, NameViolationError

_TOKEN = r"[A-Za-z][A-Za-z0-9_]*"
_NAME_RE = re.compile(rf"^(~|/)?{_TOKEN}(/{_TOKEN})*$")
_TOKEN_RE = re.compile(rf"^{_TOKEN}$")


def is_valid_name(name: str) -> bool:
    return bool(_NAME_RE.match(name))


def is_token(name: str) -> bool:
    """True for a bare single-segment name (a node name, for instance)."""
    return bool(_TOKEN_RE.match(name))


def is_absolute(name: str) -> bool:
    return name.startswith("/")


def is_valid_namespace(namespace: str) -> bool:
    """Namespaces are the root ``/`` or an absolute name."""
    if namespace == "/":
        return True
    return is_valid_name(namespace) and is_absolute(namespace)


def resolve_name(name: str, namespace: str, node: str | None = None) -> str:
    """Resolve ``name`` against an absolute ``namespace``.

    Absolute names pass through unchanged.  Relative names are joined onto
    the namespace (the root namespace collapses to a single slash).  Private
    names substitute the given node's fully qualified name for ``~`` and
    require ``node`` to be present.
    """
    if not is_valid_name(name):
        raise NameViolationError(name)
    if not is_valid_namespace(namespace):
        raise NameViolationError(namespace, "is not an absolute namespace")
    if name.startswith("/"):
        return name
    if name.startswith("~"):
        if node is None:
            raise MissingNodeContextError(name)
        if not (is_valid_name(node) and is_absolute(node)):
            raise NameViolationError(node, "is not an absolute node name")
        return node + "/" + name[1:]
    if namespace == "/":
        return "/" + name
    return namespace + "/" + name


def namespace_prefix(namespace: str) -> str:
    """The string prefix shared by every name under ``namespace``."""
    if not is_valid_namespace(namespace):
        raise NameViolationError(namespace, "is not an absolute namespace")
    return "/" if namespace == "/" else namespace + "/"


def under_namespace(fqn: str, namespace: str) -> bool:
    return fqn.startswith(namespace_prefix(namespace))
