"""Communication models: may two nodes talk at all?"""
from .params import real, take


class CommunicationModel:
    identifier = ""
    # disc models expose their range so edge models can use a spatial grid
    range = None

    def bind(self, world):
        self.world = world

    def can_communicate(self, u, v) -> bool:
        raise NotImplementedError


class DiscGraph(CommunicationModel):
    """Unit disk graph: connected iff distance <= range (boundary included)."""

    identifier = "disc_graph"

    def __init__(self, range=1.0):
        self.range = float(range)
        self.world = None

    def can_communicate(self, u, v):
        w = self.world
        w.check_node(u)
        w.check_node(v)
        if u == v:
            return False
        a = w._positions[u]
        b = w._positions[v]
        dx = a.x - b.x
        dy = a.y - b.y
        dz = a.z - b.z
        return dx * dx + dy * dy + dz * dz <= self.range * self.range


class PairListCommunication(CommunicationModel):
    """Fixed connectivity from an explicit list of undirected pairs.

    Stands in for predefined-connectivity scenarios; there is no file
    format, so it is only constructible from Python.
    """

    identifier = "pair_list"

    def __init__(self, pairs):
        self.pairs = {frozenset((int(a), int(b))) for a, b in pairs if a != b}
        self.world = None

    def can_communicate(self, u, v):
        self.world.check_node(u)
        self.world.check_node(v)
        return u != v and frozenset((u, v)) in self.pairs


def make_disc_graph(params, streams):
    p = take(params, {"range": (real(lo=0.0, lo_open=True), 1.0)})
    return DiscGraph(p["range"])
