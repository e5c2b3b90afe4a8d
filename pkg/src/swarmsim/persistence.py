"""Line-oriented text snapshots of a world.

Format (space separated, one record per line)::

    swarmsim-world v1
    world <width> <height> <round>
    node <id> <x> <y> <z>
    tag world <key> <type> <value>
    tag node <id> <key> <type> <value>

``<type>`` is one of int, real, str, bool. Keys and string values are
percent-encoded. Only persistent tags are written; volatile tags and
in-flight events are not part of a snapshot.
"""
import io
import math
import string
from urllib.parse import quote, unquote

from .errors import ParseError, VersionMismatch
from .world import World, tag_type

HEADER = "swarmsim-world"
VERSION = "v1"

_SAFE = "".join(c for c in string.punctuation if c != "%")


def _enc(s):
    return quote(s, safe=_SAFE)


def _real(x):
    return repr(float(x))


def _value_text(kind, value):
    if kind == "bool":
        return "true" if value else "false"
    if kind == "int":
        return str(int(value))
    if kind == "real":
        return _real(value)
    return _enc(value)


def dumps(world) -> str:
    out = io.StringIO()
    save_world(world, out)
    return out.getvalue()


def save_world(world, sink) -> None:
    """Write a snapshot of ``world`` to a text stream or path."""
    if isinstance(sink, (str, bytes)) or hasattr(sink, "__fspath__"):
        with open(sink, "w", encoding="utf-8", newline="\n") as fh:
            save_world(world, fh)
        return
    w, h = world.size_hint
    sink.write(f"{HEADER} {VERSION}\n")
    sink.write(f"world {_real(w)} {_real(h)} {world.round}\n")
    for i, p in enumerate(world._positions):
        sink.write(f"node {i} {_real(p.x)} {_real(p.y)} {_real(p.z)}\n")
    for key, value in world.global_tags.persistent_items():
        kind = tag_type(value)
        sink.write(f"tag world {_enc(key)} {kind} {_value_text(kind, value)}\n")
    for node in world.nodes:
        if node._tags is None:
            continue
        for key, value in node._tags.persistent_items():
            kind = tag_type(value)
            sink.write(f"tag node {node.id} {_enc(key)} {kind} {_value_text(kind, value)}\n")


def _parse_real(text, lineno):
    try:
        value = float(text)
    except ValueError:
        raise ParseError(lineno, f"bad real {text!r}") from None
    if not math.isfinite(value):
        raise ParseError(lineno, f"non-finite real {text!r}")
    return value


def _parse_int(text, lineno):
    try:
        return int(text)
    except ValueError:
        raise ParseError(lineno, f"bad integer {text!r}") from None


def _parse_value(kind, text, lineno):
    if kind == "int":
        return _parse_int(text, lineno)
    if kind == "real":
        return _parse_real(text, lineno)
    if kind == "bool":
        if text not in ("true", "false"):
            raise ParseError(lineno, f"bad bool {text!r}")
        return text == "true"
    if kind == "str":
        return unquote(text)
    raise ParseError(lineno, f"unknown tag type {kind!r}")


def loads(text, models=None) -> World:
    return load_world(io.StringIO(text), models)


def load_world(source, models=None) -> World:
    """Rebuild a world from a snapshot; ``models`` is bound to the result."""
    if isinstance(source, (str, bytes)) or hasattr(source, "__fspath__"):
        with open(source, encoding="utf-8") as fh:
            return load_world(fh, models)
    lines = source.read().split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ParseError(1, "empty snapshot")
    head = lines[0].split(" ")
    if len(head) != 2 or head[0] != HEADER:
        raise ParseError(1, "missing snapshot header")
    if head[1] != VERSION:
        raise VersionMismatch(f"unsupported snapshot version {head[1]!r}")
    if len(lines) < 2:
        raise ParseError(2, "missing world record")
    rec = lines[1].split(" ")
    if len(rec) != 4 or rec[0] != "world":
        raise ParseError(2, "expected 'world <width> <height> <round>'")
    width, height = _parse_real(rec[1], 2), _parse_real(rec[2], 2)
    round_ = _parse_int(rec[3], 2)
    if round_ < 0:
        raise ParseError(2, "negative round")
    world = World(width, height, models)
    tags = []
    for lineno, line in enumerate(lines[2:], start=3):
        rec = line.split(" ")
        kind = rec[0]
        if kind == "node":
            if len(rec) != 5:
                raise ParseError(lineno, "expected 'node <id> <x> <y> <z>'")
            node_id = _parse_int(rec[1], lineno)
            if node_id != world.node_count:
                raise ParseError(lineno, f"node ids must be dense, expected {world.node_count}")
            if tags:
                raise ParseError(lineno, "node record after tag records")
            world.add_node(tuple(_parse_real(t, lineno) for t in rec[2:]))
        elif kind == "tag":
            if len(rec) == 5 and rec[1] == "world":
                target, key, vtype, text = None, rec[2], rec[3], rec[4]
            elif len(rec) == 6 and rec[1] == "node":
                target = _parse_int(rec[2], lineno)
                if not 0 <= target < world.node_count:
                    raise ParseError(lineno, f"tag for unknown node {target}")
                key, vtype, text = rec[3], rec[4], rec[5]
            else:
                raise ParseError(lineno, "malformed tag record")
            tags.append((target, unquote(key), _parse_value(vtype, text, lineno)))
        else:
            raise ParseError(lineno, f"unknown record {kind!r}")
    for target, key, value in tags:
        world.tag_set(target, key, value, persistent=True)
    world.round = round_
    world.scheduler.current_time = float(round_)
    return world
