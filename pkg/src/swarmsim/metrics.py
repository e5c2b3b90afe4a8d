from dataclasses import asdict, dataclass


@dataclass
class Metrics:
    """Run counters. A broadcast counts once in ``messages_sent``; each
    receiver it reaches counts once in ``messages_delivered`` or
    ``messages_dropped``."""

    messages_sent: int = 0
    messages_delivered: int = 0
    messages_dropped: int = 0
    rounds_executed: int = 0
    wall_clock_ms: float = 0.0
    adjacency_entries_peak: int = 0
    payload_bytes_sent: int = 0

    def as_dict(self):
        return asdict(self)
