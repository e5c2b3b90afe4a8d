import numpy as np
import pytest

from swarmsim import Processor, World, build_model_set

from . import _acceptance_log


def brute_neighbors(pos, range_):
    """O(n^2) neighbor sets, independent of any grid."""
    pos = np.asarray(pos, dtype=np.float64)
    n = pos.shape[0]
    r2 = range_ * range_
    out = []
    for v in range(n):
        dx = pos[v, 0] - pos[:, 0]
        dy = pos[v, 1] - pos[:, 1]
        dz = pos[v, 2] - pos[:, 2]
        hit = dx * dx + dy * dy + dz * dz <= r2
        hit[v] = False
        out.append(set(np.flatnonzero(hit).tolist()))
    return out


def brute_degree_sum(pos, range_, chunk=1000):
    pos = np.asarray(pos, dtype=np.float64)
    total = 0
    r2 = range_ * range_
    for lo in range(0, pos.shape[0], chunk):
        p = pos[lo:lo + chunk]
        dx = p[:, None, 0] - pos[None, :, 0]
        dy = p[:, None, 1] - pos[None, :, 1]
        dz = p[:, None, 2] - pos[None, :, 2]
        total += int(np.count_nonzero(dx * dx + dy * dy + dz * dz <= r2)) - p.shape[0]
    return total


class Recorder(Processor):
    """Processor that records its callbacks and can be told to send."""

    def __init__(self, sends_per_round=0, log=None):
        super().__init__()
        self.sends_per_round = sends_per_round
        self.log = log if log is not None else []
        self.inbox = []

    def boot(self):
        self.log.append(("boot", self.owner))

    def work(self):
        self.log.append(("work", self.owner))
        for _ in range(self.sends_per_round):
            self.send(b"x", 1)

    def process_message(self, envelope):
        self.log.append(("recv", self.owner))
        self.inbox.append(envelope)


def make_world(points, range_=1.0, edge="list", transmission="reliable", seed=0, **extra):
    settings = {"comm_model.range": range_, "edge_model": edge,
                "transmission_model": transmission}
    settings.update(extra)
    world = World(10, 10, build_model_set(settings, seed=seed))
    for p in points:
        world.add_node(p)
    return world


@pytest.fixture
def line_world():
    return make_world([(0, 0), (1, 0), (2, 0)])


def pytest_terminal_summary(terminalreporter):
    if _acceptance_log.LINES:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_log.LINES:
            terminalreporter.write_line(line)
