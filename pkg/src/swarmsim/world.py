"""The simulated world: nodes, processors, messages and tags."""
from __future__ import annotations

import enum
import math
import numbers
from dataclasses import dataclass, field
from typing import Any, Callable, NamedTuple, Sequence

import numpy as np

from .errors import AddAfterStart, IllegalTransition, SenderInactive, UnknownNode
from .metrics import Metrics
from .scheduler import EventScheduler


class Position(NamedTuple):
    x: float
    y: float
    z: float = 0.0


class ProcessorState(enum.IntEnum):
    ACTIVE = 0
    SLEEPING = 1
    INACTIVE = 2


ACTIVE = ProcessorState.ACTIVE
SLEEPING = ProcessorState.SLEEPING
INACTIVE = ProcessorState.INACTIVE


def check_transition(old, new):
    if old == INACTIVE and new != INACTIVE:
        raise IllegalTransition("an inactive processor cannot be revived")


# --- tags -------------------------------------------------------------------

def tag_type(value):
    """Snapshot type name of a tag value; raises TypeError for anything else."""
    if isinstance(value, (bool, np.bool_)):
        return "bool"
    if isinstance(value, numbers.Integral):
        return "int"
    if isinstance(value, numbers.Real):
        return "real"
    if isinstance(value, str):
        return "str"
    raise TypeError(f"tag values must be int, real, str or bool, not {type(value).__name__}")


def _normalize(value):
    kind = tag_type(value)
    if kind == "bool":
        return bool(value)
    if kind == "int":
        return int(value)
    if kind == "real":
        return float(value)
    return value


class TagMap:
    """String-keyed primitive values, each flagged persistent or volatile."""

    __slots__ = ("_entries",)

    def __init__(self):
        self._entries: dict[str, tuple[Any, bool]] = {}

    def set(self, key: str, value, persistent: bool = True) -> None:
        if not isinstance(key, str) or not key:
            raise TypeError("tag keys must be non-empty strings")
        self._entries[key] = (_normalize(value), bool(persistent))

    def get(self, key: str, default=None):
        entry = self._entries.get(key)
        return default if entry is None else entry[0]

    def is_persistent(self, key: str) -> bool:
        return self._entries[key][1]

    def delete(self, key: str) -> bool:
        return self._entries.pop(key, None) is not None

    def items(self):
        return ((k, v) for k, (v, _) in self._entries.items())

    def persistent_items(self):
        return ((k, v) for k, (v, p) in self._entries.items() if p)

    def keys(self):
        return self._entries.keys()

    def __contains__(self, key):
        return key in self._entries

    def __len__(self):
        return len(self._entries)

    def __repr__(self):
        return f"TagMap({dict(self.items())!r})"


# --- messages ---------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class MessageEnvelope:
    sender: int
    send_round: int
    payload: bytes = b""
    type_tag: str = ""
    size_bytes: int = 0


@dataclass(slots=True)
class EnvelopeBatch:
    """Many broadcasts from one round that share a type tag.

    Payloads are stored column-wise in ``fields`` (one array per payload
    field, one entry per sender); ``encode(batch, i)`` produces the byte
    payload of message ``i`` when a scalar envelope is needed.
    """

    senders: np.ndarray
    send_round: int
    type_tag: str
    fields: dict[str, np.ndarray]
    size_bytes: int = 0
    encode: Callable[["EnvelopeBatch", int], bytes] | None = None

    def __len__(self):
        return int(self.senders.size)

    def envelope(self, i: int) -> MessageEnvelope:
        payload = self.encode(self, i) if self.encode is not None else b""
        return MessageEnvelope(int(self.senders[i]), self.send_round, payload,
                               self.type_tag, self.size_bytes)


# --- processors -------------------------------------------------------------

class Processor:
    """Per-node behavior unit.

    Subclasses override ``boot``, ``work`` and ``process_message``. The world
    calls ``boot`` once before anything else, and only calls ``work`` and
    ``process_message`` while the processor is ACTIVE.
    """

    group = None

    def __init__(self):
        self._state = ACTIVE
        self.owner: int | None = None
        self.world: World | None = None

    @property
    def state(self) -> ProcessorState:
        return self._state

    @state.setter
    def state(self, new):
        new = ProcessorState(new)
        check_transition(self._state, new)
        self._state = new

    def sleep(self):
        self.state = SLEEPING

    def wake(self):
        self.state = ACTIVE

    def deactivate(self):
        self.state = INACTIVE

    def boot(self) -> None:
        pass

    def work(self) -> None:
        pass

    def process_message(self, envelope: MessageEnvelope) -> None:
        pass

    def send(self, payload: bytes = b"", size_bytes: int | None = None, type_tag: str = ""):
        if size_bytes is None:
            size_bytes = len(payload)
        self.world.send_message(self.owner, payload, size_bytes, type_tag)


class Node:
    __slots__ = ("id", "world", "processors", "_tags")

    def __init__(self, world, node_id, processors):
        self.id = node_id
        self.world = world
        self.processors = processors
        self._tags = None

    @property
    def position(self) -> Position:
        return self.world._positions[self.id]

    @property
    def tags(self) -> TagMap:
        if self._tags is None:
            self._tags = TagMap()
        return self._tags

    @property
    def state(self) -> ProcessorState:
        states = {p.state for p in self.processors}
        if ACTIVE in states:
            return ACTIVE
        if SLEEPING in states:
            return SLEEPING
        return INACTIVE

    def __repr__(self):
        return f"Node({self.id}, {tuple(self.position)})"


@dataclass(frozen=True)
class RoundReport:
    round: int
    deliveries: int
    worked: int


# --- models bundle ----------------------------------------------------------

@dataclass
class ModelSet:
    """The models a world is simulated with."""

    communication: Any
    edge: Any
    transmission: Any
    distance: Any = None
    random_variable: Any = None
    names: dict[str, str] = field(default_factory=dict)

    @classmethod
    def default(cls, range_: float = 1.0, edge: str = "list",
                transmission: str = "reliable", seed: int = 0) -> "ModelSet":
        from .models import build_model_set

        return build_model_set({"comm_model.range": range_, "edge_model": edge,
                                "transmission_model": transmission}, seed=seed)


# --- the world --------------------------------------------------------------

class World:
    """Container for every node of one simulation run."""

    def __init__(self, width: float = 0.0, height: float = 0.0,
                 models: ModelSet | None = None, max_rounds: int | None = None,
                 batching: bool = True):
        self.size_hint = (float(width), float(height))
        self.round = 0
        self.max_rounds = max_rounds
        self.global_tags = TagMap()
        self.nodes: list[Node] = []
        self.metrics = Metrics()
        self.scheduler = EventScheduler()
        self.batching = batching
        self._positions: list[Position] = []
        self._pos_array = None
        self._started = False
        self._booted = False
        self._group = None
        self.models = models if models is not None else ModelSet.default()
        self._bind_models()

    def _bind_models(self):
        m = self.models
        m.communication.bind(self)
        m.edge.bind(self, m.communication)
        if m.distance is not None:
            m.distance.bind(self, m.communication)

    # -- nodes --

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def started(self) -> bool:
        return self._started or self.round > 0

    @property
    def positions(self) -> np.ndarray:
        """(n, 3) float64 array of node positions (read-only)."""
        if self._pos_array is None or self._pos_array.shape[0] != len(self._positions):
            arr = np.array(self._positions, dtype=np.float64).reshape(-1, 3)
            arr.flags.writeable = False
            self._pos_array = arr
        return self._pos_array

    def add_node(self, position, processors: Sequence[Processor] = ()) -> int:
        if self.started:
            raise AddAfterStart("nodes cannot be added once the simulation has started")
        pos = Position(*(float(c) for c in position))
        if not all(math.isfinite(c) for c in pos):
            raise ValueError(f"non-finite position {tuple(pos)}")
        node_id = len(self.nodes)
        procs = list(processors)
        for p in procs:
            p.owner = node_id
            p.world = self
        self._positions.append(pos)
        self.nodes.append(Node(self, node_id, procs))
        self._pos_array = None
        self.models.edge.invalidate()
        return node_id

    def add_nodes(self, positions, processors: Sequence[Sequence[Processor]] | None = None):
        """Add many nodes at once; returns the range of new ids."""
        first = len(self.nodes)
        positions = np.asarray(positions, dtype=np.float64)
        if positions.ndim != 2 or positions.shape[1] not in (2, 3):
            raise ValueError("positions must have shape (n, 2) or (n, 3)")
        for i, row in enumerate(positions):
            self.add_node(row, processors[i] if processors is not None else ())
        return range(first, len(self.nodes))

    def node(self, node_id) -> Node:
        if isinstance(node_id, (bool, np.bool_)) or not isinstance(node_id, numbers.Integral):
            raise UnknownNode(node_id)
        if not 0 <= node_id < len(self.nodes):
            raise UnknownNode(node_id)
        return self.nodes[node_id]

    def check_node(self, node_id) -> int:
        self.node(node_id)
        return int(node_id)

    # -- tags --

    def _tag_target(self, target) -> TagMap:
        if target is None or target is self or target == "world":
            return self.global_tags
        return self.node(target).tags

    def tag_set(self, target, key: str, value, persistent: bool = True) -> None:
        self._tag_target(target).set(key, value, persistent)

    def tag_get(self, target, key: str, default=None):
        return self._tag_target(target).get(key, default)

    # -- lifecycle --

    def _detect_group(self):
        if not self.batching or not self.nodes:
            return None
        first = self.nodes[0].processors
        if len(first) != 1 or first[0].group is None:
            return None
        group = first[0].group
        for node in self.nodes:
            procs = node.processors
            if len(procs) != 1 or procs[0].group is not group or procs[0].index != node.id:
                return None
        if group.size != len(self.nodes):
            return None
        return group

    def start(self):
        """Boot every processor (once). Called implicitly by step_round and sends."""
        if self._booted:
            return
        self._booted = True
        self._started = True
        self.models.edge.prepare()
        self._group = self._detect_group()
        if self._group is not None:
            self._group.boot_all(self)
            return
        for node in self.nodes:
            for p in node.processors:
                if p.state != INACTIVE:
                    p.boot()

    def step_round(self) -> RoundReport:
        self.start()
        before = self.metrics.messages_delivered
        self.scheduler.advance_until(self.round + 1, self)
        deliveries = self.metrics.messages_delivered - before
        worked = self._work_phase()
        self.round += 1
        m = self.metrics
        m.rounds_executed += 1
        m.adjacency_entries_peak = max(m.adjacency_entries_peak,
                                       self.models.edge.adjacency_entries_peak)
        return RoundReport(self.round - 1, deliveries, worked)

    def _work_phase(self) -> int:
        if self._group is not None:
            return self._group.work_all(self)
        worked = 0
        for node in self.nodes:
            did = False
            for p in node.processors:
                if p.state == ACTIVE:
                    p.work()
                    did = True
            worked += did
        return worked

    def is_done(self) -> bool:
        if self.max_rounds is not None and self.round >= self.max_rounds:
            return True
        if self._group is not None:
            return self._group.all_inactive()
        return all(p.state == INACTIVE for node in self.nodes for p in node.processors)

    # -- messaging --

    def send_message(self, sender: int, payload: bytes = b"", size_bytes: int = 0,
                     type_tag: str = "") -> int:
        """Broadcast one message from ``sender``; returns the deliveries scheduled."""
        node = self.node(sender)
        if node.state != ACTIVE:
            raise SenderInactive(f"node {sender} is not active")
        self.start()
        env = MessageEnvelope(int(sender), self.round, payload, type_tag, int(size_bytes))
        self.metrics.messages_sent += 1
        self.metrics.payload_bytes_sent += env.size_bytes
        return self.models.transmission.transmit(env, self)

    def broadcast_batch(self, batch: EnvelopeBatch) -> int:
        """Send one message per entry of ``batch``, in sender order."""
        n = len(batch)
        if n == 0:
            return 0
        self.start()
        self.metrics.messages_sent += n
        self.metrics.payload_bytes_sent += n * batch.size_bytes
        return self.models.transmission.transmit_batch(batch, self)

    def deliver(self, envelope: MessageEnvelope, receivers) -> None:
        """Hand one envelope to every receiver; used by transmission models."""
        self.metrics.messages_delivered += len(receivers)
        for r in receivers:
            self._dispatch(int(r), envelope)

    def deliver_batch(self, batch: EnvelopeBatch, indptr, indices) -> None:
        """Deliver message ``k`` of ``batch`` to ``indices[indptr[k]:indptr[k+1]]``."""
        self.metrics.messages_delivered += int(indices.size)
        group = self._group
        if group is not None and group.accepts(batch.type_tag):
            group.receive_batch(self, batch, indptr, indices)
            return
        for k in range(len(batch)):
            a, b = indptr[k], indptr[k + 1]
            if a == b:
                continue
            env = batch.envelope(k)
            for r in indices[a:b]:
                self._dispatch(int(r), env)

    def _dispatch(self, receiver: int, envelope: MessageEnvelope):
        for p in self.nodes[receiver].processors:
            if p.state == ACTIVE:
                p.process_message(envelope)
