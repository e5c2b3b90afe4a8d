import re

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from swarmsim import ACTIVE, INACTIVE, SLEEPING, Processor, World
from swarmsim.errors import AddAfterStart, IllegalTransition, SenderInactive, UnknownNode

from .conftest import Recorder, brute_neighbors, make_world


def test_first_node_gets_id_zero():
    w = World(10, 10)
    assert w.add_node((0, 0, 0)) == 0


def test_ids_are_dense():
    w = World(10, 10)
    ids = [w.add_node((i % 10, i // 10)) for i in range(100)]
    assert ids == list(range(100))
    assert w.node_count == 100


def test_add_after_start_rejected():
    w = World(10, 10)
    w.add_node((0, 0))
    w.step_round()
    with pytest.raises(AddAfterStart):
        w.add_node((1, 1))


def test_position_defaults_planar_and_rejects_nan():
    w = World(10, 10)
    w.add_node((1.5, 2.5))
    assert tuple(w.nodes[0].position) == (1.5, 2.5, 0.0)
    with pytest.raises(ValueError):
        w.add_node((float("nan"), 0))


def test_broadcast_reaches_both_neighbors(line_world):
    w = line_world
    procs = [Recorder() for _ in range(3)]
    for node, p in zip(w.nodes, procs):
        node.processors.append(p)
        p.owner, p.world = node.id, w
    w.send_message(1, b"hi", 2)
    assert w.metrics.messages_sent == 1
    assert len(w.scheduler) == 1
    w.step_round()
    assert w.metrics.messages_delivered == 0  # delivery time is round 1
    report = w.step_round()
    assert report.deliveries == 2
    assert w.metrics.messages_delivered == 2
    assert [e.sender for e in procs[0].inbox] == [1]
    assert [e.sender for e in procs[2].inbox] == [1]
    assert procs[1].inbox == []
    assert procs[0].inbox[0].send_round == 0


def test_isolated_sender_delivers_nothing():
    w = make_world([(0, 0), (5, 5)])
    p = Recorder()
    w.nodes[0].processors.append(p)
    p.owner, p.world = 0, w
    w.send_message(0)
    w.step_round()
    w.step_round()
    assert w.metrics.messages_sent == 1
    assert w.metrics.messages_delivered == 0


def test_380_broadcasts_per_node():
    rng = np.random.default_rng(3)
    w = World(10, 10)
    for p in rng.random((100, 2)) * 10:
        w.add_node(p, [Recorder()])
    for _ in range(380):
        for v in range(100):
            w.send_message(v)
        w.step_round()
    assert w.metrics.messages_sent == 38_000


def test_send_errors():
    w = make_world([(0, 0)])
    with pytest.raises(UnknownNode):
        w.send_message(7)
    with pytest.raises(SenderInactive):
        w.send_message(0)  # no processors: node is inactive


def test_empty_round_counts():
    w = World(10, 10)
    for i in range(3):
        w.add_node((i * 3, 0), [Processor()])
    report = w.step_round()
    assert (report.deliveries, report.worked, w.round) == (0, 3, 1)


class _HalfRoundSender(Processor):
    def __init__(self, log):
        super().__init__()
        self.log = log

    def work(self):
        self.log.append(("work", self.owner, self.world.round))

    def process_message(self, env):
        self.log.append(("recv", self.owner, self.world.round))


def test_sub_round_event_runs_before_work():
    log = []
    w = World(10, 10)
    w.add_node((0, 0), [_HalfRoundSender(log)])
    w.step_round()
    w.scheduler.schedule(1.5, lambda world: log.append(("event", world.round)))
    w.step_round()
    assert log == [("work", 0, 0), ("event", 1), ("work", 0, 1)]


def test_all_inactive_is_done():
    w = World(10, 10)
    procs = [Processor() for _ in range(3)]
    for i, p in enumerate(procs):
        w.add_node((i, 0), [p])
    assert not w.is_done()
    for p in procs:
        p.deactivate()
    assert w.step_round().worked == 0
    assert w.is_done()


def test_max_rounds_is_done():
    w = World(10, 10, max_rounds=380)
    w.add_node((0, 0), [Processor()])
    while not w.is_done():
        w.step_round()
    assert w.round == 380


def test_node_state_derivation():
    w = World(10, 10)
    a, b = Processor(), Processor()
    w.add_node((0, 0), [a, b])
    node = w.nodes[0]
    assert node.state == ACTIVE
    a.sleep()
    assert node.state == ACTIVE
    b.sleep()
    assert node.state == SLEEPING
    a.deactivate()
    assert node.state == SLEEPING
    b.deactivate()
    assert node.state == INACTIVE


def test_inactive_is_absorbing():
    p = Processor()
    p.deactivate()
    with pytest.raises(IllegalTransition):
        p.wake()
    with pytest.raises(IllegalTransition):
        p.sleep()


def test_sleeping_processor_neither_works_nor_receives(line_world):
    w = line_world
    log = []
    procs = [Recorder(log=log) for _ in range(3)]
    for node, p in zip(w.nodes, procs):
        node.processors.append(p)
        p.owner, p.world = node.id, w
    procs[0].sleep()
    w.send_message(1)
    w.step_round()
    w.step_round()
    assert ("work", 0) not in log and ("recv", 0) not in log
    # delivered to the node even though nothing processed it
    assert w.metrics.messages_delivered == 2


def test_tags():
    w = make_world([(0, 0)])
    w.tag_set(0, "hops", 3, persistent=True)
    assert w.tag_get(0, "hops") == 3
    assert w.tag_get(0, "never") is None
    w.tag_set(None, "name", "run", persistent=False)
    assert w.tag_get("world", "name") == "run"
    w.tag_set(0, "hops", 4.5, persistent=False)
    assert w.tag_get(0, "hops") == 4.5
    assert not w.nodes[0].tags.is_persistent("hops")
    with pytest.raises(UnknownNode):
        w.tag_set(3, "x", 1)
    with pytest.raises(UnknownNode):
        w.tag_get(-1, "x")
    with pytest.raises(TypeError):
        w.tag_set(0, "bad", [1, 2])


def test_message_conservation_reliable():
    rng = np.random.default_rng(11)
    pos = np.zeros((150, 3))
    pos[:, :2] = rng.random((150, 2)) * 6
    w = World(6, 6)
    for p in pos:
        w.add_node(p, [Recorder(sends_per_round=1)])
    w.max_rounds = 5
    while not w.is_done():
        w.step_round()
    # sends of the final round are still in flight
    w.max_rounds = None
    for node in w.nodes:
        for p in node.processors:
            p.sends_per_round = 0
    w.step_round()
    expected = 5 * sum(len(s) for s in brute_neighbors(pos, 1.0))
    assert w.metrics.messages_delivered == expected


class Scripted(Processor):
    """Random sleep/wake/deactivate/send behavior driven by a seeded rng."""

    def __init__(self, rng, log):
        super().__init__()
        self.rng = rng
        self.log = log

    def _act(self):
        roll = self.rng.random()
        if roll < 0.05:
            self.deactivate()
        elif roll < 0.15:
            self.sleep()
        elif roll < 0.5:
            self.send(b"m", 1)

    def boot(self):
        self.log.append((self.owner, id(self), "b", self.state))
        self._act()

    def work(self):
        self.log.append((self.owner, id(self), "w", self.state))
        self._act()

    def process_message(self, envelope):
        self.log.append((self.owner, id(self), "p", self.state))
        if self.state == ACTIVE:
            self._act()


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 25))
def test_processor_lifecycle_trace(seed, n):
    rng = np.random.default_rng(seed)
    log = []
    w = World(4, 4)
    procs = []
    for _ in range(n):
        ps = [Scripted(rng, log) for _ in range(int(rng.integers(1, 3)))]
        procs.extend(ps)
        w.add_node(rng.random(2) * 4, ps)
    for r in range(12):
        for p in procs:
            if p.state == SLEEPING and rng.random() < 0.3:
                p.wake()
        before = w.round
        w.step_round()
        assert w.round == before + 1
    for p in procs:
        trace = "".join(kind for _, pid, kind, _ in log if pid == id(p))
        assert re.fullmatch(r"b[pw]*", trace), trace
    # every work/process_message call happened while active
    assert all(state == ACTIVE for *_, kind, state in log if kind in "pw")


def test_neighbors_of_line(line_world):
    assert set(line_world.models.edge.neighbors(1).tolist()) == {0, 2}
    assert set(line_world.models.edge.neighbors(0).tolist()) == {1}
