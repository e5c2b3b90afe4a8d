"""Time-stamp broadcast workload used for the scaling benchmarks.

Every node periodically broadcasts its local clock; receivers convert the
stamp into their own clock and accumulate the observed skew. Local clock is
the simulation round plus a per-node offset drawn once from a random
variable. Conversion subtracts the receiver's estimate of the sender's offset
(zero by default) and is deliberately cheap: the workload exists to measure
message dispatch, not synchronisation quality.

State is held column-wise in a ``TimesyncGroup``. When every node of a world
runs exactly one member of the same group, the world drives the whole group
through ``work_all``/``receive_batch`` and the numeric kernels; otherwise
each ``TimesyncProcessor`` runs the same arithmetic one message at a time.
"""
import struct

import numpy as np

from . import kernels
from .world import ACTIVE, INACTIVE, EnvelopeBatch, Processor, ProcessorState, check_transition

TYPE_TAG = "timesync"
PAYLOAD = struct.Struct("<dq")  # local send stamp, sequence number
DEFAULT_TOTAL_MESSAGES = 380


def _encode(batch, i):
    return PAYLOAD.pack(float(batch.fields["stamp"][i]), int(batch.fields["seq"][i]))


class TimesyncGroup:
    def __init__(self, offsets, total_messages=DEFAULT_TOTAL_MESSAGES, send_period=1,
                 size_bytes=PAYLOAD.size):
        if total_messages < 0:
            raise ValueError("total_messages must be >= 0")
        if send_period < 1:
            raise ValueError("send_period must be >= 1")
        self.offset = np.ascontiguousarray(offsets, dtype=np.float64)
        n = self.size = self.offset.size
        self.total_messages = int(total_messages)
        self.send_period = int(send_period)
        self.size_bytes = int(size_bytes)
        self.state = np.zeros(n, dtype=np.int8)
        self.estimate = np.zeros(n)
        self.boots = np.zeros(n, dtype=np.int64)
        self.sent = np.zeros(n, dtype=np.int64)
        self.received = np.zeros(n, dtype=np.int64)
        self.skew_sum = np.zeros(n)
        self.members = [TimesyncProcessor(self, i) for i in range(n)]

    def accepts(self, type_tag):
        return type_tag == TYPE_TAG

    def all_inactive(self):
        return bool(np.all(self.state == INACTIVE))

    # -- whole-group path --

    def boot_all(self, world):
        self.boots[self.state != INACTIVE] += 1

    def work_all(self, world):
        active = np.flatnonzero(self.state == ACTIVE)
        finished = self.sent[active] >= self.total_messages
        self.state[active[finished]] = INACTIVE
        if world.round % self.send_period == 0:
            senders = active[~finished]
            if senders.size:
                stamps = world.round + self.offset[senders]
                seq = self.sent[senders]
                self.sent[senders] += 1
                world.broadcast_batch(EnvelopeBatch(
                    senders, world.round, TYPE_TAG, {"stamp": stamps, "seq": seq},
                    self.size_bytes, _encode))
        return int(active.size)

    def receive_batch(self, world, batch, indptr, indices):
        kernels.timesync_receive(indptr, indices, batch.fields["stamp"], float(world.round),
                                 self.state, self.offset, self.estimate, self.received,
                                 self.skew_sum)

    # -- one-processor path --

    def work_one(self, i, world):
        if self.sent[i] >= self.total_messages:
            self.state[i] = INACTIVE
        elif world.round % self.send_period == 0:
            stamp = world.round + self.offset[i]
            seq = int(self.sent[i])
            self.sent[i] += 1
            world.send_message(i, PAYLOAD.pack(float(stamp), seq), self.size_bytes, TYPE_TAG)

    def receive_one(self, i, envelope, world):
        if envelope.type_tag != TYPE_TAG:
            return
        stamp, _seq = PAYLOAD.unpack(envelope.payload)
        converted = stamp - self.estimate[i]
        self.received[i] += 1
        self.skew_sum[i] += (float(world.round) + self.offset[i]) - converted


class TimesyncProcessor(Processor):
    """One node's view of a TimesyncGroup."""

    def __init__(self, group, index):
        super().__init__()
        self.group = group
        self.index = index

    @property
    def state(self):
        return ProcessorState(int(self.group.state[self.index]))

    @state.setter
    def state(self, new):
        new = ProcessorState(new)
        check_transition(self.state, new)
        self.group.state[self.index] = int(new)

    def boot(self):
        self.group.boots[self.index] += 1

    def work(self):
        self.group.work_one(self.index, self.world)

    def process_message(self, envelope):
        self.group.receive_one(self.index, envelope, self.world)


def make_group(count, offset_rv, total_messages=DEFAULT_TOTAL_MESSAGES, send_period=1,
               size_bytes=PAYLOAD.size):
    """A group of ``count`` processors with offsets drawn from ``offset_rv``."""
    return TimesyncGroup(offset_rv.sample_array(count), total_messages, send_period, size_bytes)

