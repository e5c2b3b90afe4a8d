"""Transmission models: per-message drop and delay decisions."""
import numpy as np

from .params import real, string, take


def filter_csr(indptr, indices, keep):
    """Drop the entries of a CSR matrix where ``keep`` is False."""
    kept = np.zeros(indices.size + 1, dtype=np.int64)
    np.cumsum(keep, out=kept[1:])
    return kept[indptr], indices[keep]


class TransmissionModel:
    """Decides which neighbors receive a broadcast, and when.

    ``transmit`` handles one envelope, ``transmit_batch`` a whole
    ``EnvelopeBatch``; both return the number of deliveries scheduled. The
    default ``transmit_batch`` falls back to one ``transmit`` per message.
    """

    identifier = ""

    def transmit(self, envelope, world) -> int:
        raise NotImplementedError

    def transmit_batch(self, batch, world) -> int:
        return sum(self.transmit(batch.envelope(i), world) for i in range(len(batch)))


class Reliable(TransmissionModel):
    """Every neighbor receives the message exactly one round later."""

    identifier = "reliable"

    def transmit(self, envelope, world):
        receivers = world.models.edge.neighbors(envelope.sender)
        if receivers.size:
            world.scheduler.schedule(envelope.send_round + 1,
                                     lambda w: w.deliver(envelope, receivers))
        return int(receivers.size)

    def transmit_batch(self, batch, world):
        indptr, indices = world.models.edge.neighbors_csr(batch.senders)
        if indices.size:
            world.scheduler.schedule(batch.send_round + 1,
                                     lambda w: w.deliver_batch(batch, indptr, indices))
        return int(indices.size)


class RandomDrop(TransmissionModel):
    """Each receiver independently loses the message with probability ``p``."""

    identifier = "random_drop"

    def __init__(self, p, rng):
        self.p = float(p)
        self.rng = rng

    def transmit(self, envelope, world):
        receivers = world.models.edge.neighbors(envelope.sender)
        keep = self.rng.random(receivers.size) >= self.p
        receivers = receivers[keep]
        world.metrics.messages_dropped += int(keep.size - receivers.size)
        if receivers.size:
            world.scheduler.schedule(envelope.send_round + 1,
                                     lambda w: w.deliver(envelope, receivers))
        return int(receivers.size)

    def transmit_batch(self, batch, world):
        indptr, indices = world.models.edge.neighbors_csr(batch.senders)
        # one draw per (message, neighbor) in sender-major order, same as transmit()
        keep = self.rng.random(indices.size) >= self.p
        indptr, indices = filter_csr(indptr, indices, keep)
        world.metrics.messages_dropped += int(keep.size - indices.size)
        if indices.size:
            world.scheduler.schedule(batch.send_round + 1,
                                     lambda w: w.deliver_batch(batch, indptr, indices))
        return int(indices.size)


class Delay(TransmissionModel):
    """Per-receiver extra delay drawn from a random variable (clamped at 0)."""

    identifier = "delay"

    def __init__(self, delay):
        self.delay = delay

    def alter(self, envelope, receiver):
        """Per-receiver copy hook; the shipped model passes messages unchanged."""
        return envelope

    def transmit(self, envelope, world):
        receivers = world.models.edge.neighbors(envelope.sender)
        base = envelope.send_round + 1
        for r in receivers.tolist():
            extra = max(0.0, self.delay.sample())
            env = self.alter(envelope, r)
            world.scheduler.schedule(base + extra,
                                     lambda w, env=env, r=r: w.deliver(env, (r,)))
        return int(receivers.size)


def make_reliable(params, streams):
    take(params, {})
    return Reliable()


def make_random_drop(params, streams):
    p = take(params, {"p": (real(lo=0.0, hi=1.0), 0.0), "stream": (string, "")})
    return RandomDrop(p["p"], streams.generator(p["stream"] or "transmission.random_drop"))


def make_delay(params, streams):
    from . import registry

    p, rest = take(params, {"rv": (string, "uniform"), "stream": (string, "")},
                   passthrough=True)
    rest["stream"] = p["stream"] or "transmission.delay"
    return Delay(registry.create("random_variable", p["rv"], rest, streams))
