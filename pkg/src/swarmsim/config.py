"""Setup-file parsing.

One task invocation per line::

    taskname key=value [key=value ...]   # comment

Values become int, real, bool (``true``/``false``) or, failing those, str.
"""
import re
from dataclasses import dataclass, field

from .errors import ParseError

_INT = re.compile(r"-?[0-9]+\Z")
_REAL = re.compile(r"[-+]?(?:[0-9]+\.?[0-9]*|\.[0-9]+)(?:[eE][-+]?[0-9]+)?\Z")
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_.\-]*\Z")


@dataclass
class TaskInvocation:
    name: str
    params: dict = field(default_factory=dict)
    line: int = 0

    def __eq__(self, other):
        # line numbers are positional bookkeeping, not part of the program
        if not isinstance(other, TaskInvocation):
            return NotImplemented
        return self.name == other.name and _typed(self.params) == _typed(other.params)


def _typed(params):
    return {k: (type(v), v) for k, v in params.items()}


@dataclass
class ConfigProgram:
    invocations: list = field(default_factory=list)

    def __iter__(self):
        return iter(self.invocations)

    def __len__(self):
        return len(self.invocations)


def parse_value(text):
    if _INT.match(text):
        return int(text)
    if _REAL.match(text):
        return float(text)
    if text == "true":
        return True
    if text == "false":
        return False
    return text


def parse_config(text) -> ConfigProgram:
    program = ConfigProgram()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        name = tokens[0]
        if "=" in name or not _NAME.match(name):
            raise ParseError(lineno, f"empty or invalid task name {name!r}")
        params = {}
        for tok in tokens[1:]:
            key, eq, value = tok.partition("=")
            if not eq or not key or not value:
                raise ParseError(lineno, f"malformed key=value pair {tok!r}")
            if not _NAME.match(key):
                raise ParseError(lineno, f"invalid key {key!r}")
            if key in params:
                raise ParseError(lineno, f"duplicate key {key!r}")
            params[key] = parse_value(value)
        program.invocations.append(TaskInvocation(name, params, lineno))
    return program


def format_value(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def format_config(program) -> str:
    lines = []
    for inv in program:
        parts = [inv.name] + [f"{k}={format_value(v)}" for k, v in inv.params.items()]
        lines.append(" ".join(parts))
    return "\n".join(lines) + ("\n" if lines else "")
