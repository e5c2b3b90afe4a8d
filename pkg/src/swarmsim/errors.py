"""Exception types raised by the simulator."""


class SimulationError(Exception):
    """Base class for all simulator errors."""


class UnknownNode(SimulationError, KeyError):
    def __init__(self, node):
        super().__init__(node)
        self.node = node

    def __str__(self):
        return f"unknown node id {self.node!r}"


class AddAfterStart(SimulationError):
    pass


class SenderInactive(SimulationError):
    pass


class IllegalTransition(SimulationError):
    pass


class ParseError(SimulationError):
    def __init__(self, line, reason):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class VersionMismatch(SimulationError):
    pass


class UnknownIdentifier(SimulationError):
    pass


class InvalidParameter(SimulationError, ValueError):
    def __init__(self, key, reason=""):
        msg = f"invalid parameter {key!r}"
        if reason:
            msg += f": {reason}"
        super().__init__(msg)
        self.key = key


class UnknownParameter(SimulationError):
    def __init__(self, key):
        super().__init__(f"unknown parameter {key!r}")
        self.key = key


class TimeInPast(SimulationError):
    pass


class RunawayEvents(SimulationError):
    pass


class DuplicateTask(SimulationError):
    pass


class UnknownTask(SimulationError):
    pass


class MissingParameter(SimulationError):
    def __init__(self, key):
        super().__init__(f"missing required parameter {key!r}")
        self.key = key


class WorldMissing(SimulationError):
    pass
