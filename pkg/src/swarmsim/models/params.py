"""Strict parameter handling for model factories."""
import math
import numbers

from ..errors import InvalidParameter, UnknownParameter

REQUIRED = object()


def real(lo=None, hi=None, lo_open=False):
    def check(key, value):
        if isinstance(value, bool) or not isinstance(value, numbers.Real):
            raise InvalidParameter(key, f"expected a number, got {value!r}")
        value = float(value)
        if not math.isfinite(value):
            raise InvalidParameter(key, "must be finite")
        if lo is not None and (value < lo or (lo_open and value == lo)):
            raise InvalidParameter(key, f"must be {'>' if lo_open else '>='} {lo}")
        if hi is not None and value > hi:
            raise InvalidParameter(key, f"must be <= {hi}")
        return value
    return check


def integer(lo=None):
    def check(key, value):
        if isinstance(value, bool) or not isinstance(value, numbers.Integral):
            raise InvalidParameter(key, f"expected an integer, got {value!r}")
        value = int(value)
        if lo is not None and value < lo:
            raise InvalidParameter(key, f"must be >= {lo}")
        return value
    return check


def string(key, value):
    if not isinstance(value, str):
        raise InvalidParameter(key, f"expected a string, got {value!r}")
    return value


def take(params, schema, passthrough=False):
    """Validate ``params`` against ``schema`` = {name: (check, default)}.

    Unknown keys raise UnknownParameter unless ``passthrough``; then they are
    returned as a second dict for forwarding.
    """
    params = dict(params or {})
    out = {}
    for key, (check, default) in schema.items():
        if key in params:
            out[key] = check(key, params.pop(key))
        elif default is REQUIRED:
            raise InvalidParameter(key, "required")
        else:
            out[key] = default
    if passthrough:
        return out, params
    if params:
        raise UnknownParameter(sorted(params)[0])
    return out
