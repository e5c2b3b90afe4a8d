"""Seeded random streams and random-variable models."""
import hashlib

import numpy as np

from ..errors import InvalidParameter
from .params import real, string, take


def stream_key(name):
    """Four 32-bit words derived from a stream name (SHA-256 prefix)."""
    digest = hashlib.sha256(name.encode("utf-8")).digest()
    return tuple(int.from_bytes(digest[i:i + 4], "little") for i in range(0, 16, 4))


class StreamFactory:
    """Independent generators keyed by (run seed, stream name).

    Each stream is ``PCG64(SeedSequence(seed, spawn_key=stream_key(name)))``,
    so a stream's sequence depends on nothing but the seed and its own name:
    adding or removing other streams never perturbs it.
    """

    def __init__(self, seed=0):
        self.seed = int(seed)
        if self.seed < 0:
            raise InvalidParameter("seed", "must be non-negative")

    def generator(self, name, *extra):
        key = stream_key(name) + tuple(int(e) for e in extra)
        return np.random.Generator(np.random.PCG64(
            np.random.SeedSequence(self.seed, spawn_key=key)))


def derive_seed(seed, *path):
    """A 64-bit seed derived from ``seed`` and integer ``path`` components."""
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(p) for p in path))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


class RandomVariable:
    identifier = ""

    def __init__(self, rng):
        self.rng = rng

    def sample(self) -> float:
        raise NotImplementedError

    def sample_array(self, k):
        """``k`` draws; identical to ``k`` consecutive ``sample()`` calls."""
        return np.array([self.sample() for _ in range(k)], dtype=np.float64)


class Constant(RandomVariable):
    identifier = "constant"

    def __init__(self, c, rng=None):
        super().__init__(rng)
        self.c = float(c)

    def sample(self):
        return self.c

    def sample_array(self, k):
        return np.full(k, self.c)


class Uniform(RandomVariable):
    identifier = "uniform"

    def __init__(self, lo, hi, rng):
        if lo > hi:
            raise InvalidParameter("lo", f"lo={lo} exceeds hi={hi}")
        super().__init__(rng)
        self.lo, self.hi = float(lo), float(hi)

    def sample(self):
        return float(self.rng.uniform(self.lo, self.hi))

    def sample_array(self, k):
        return self.rng.uniform(self.lo, self.hi, size=k)


class Normal(RandomVariable):
    identifier = "normal"

    def __init__(self, mean, sigma, rng):
        if sigma < 0:
            raise InvalidParameter("sigma", "must be >= 0")
        super().__init__(rng)
        self.mean, self.sigma = float(mean), float(sigma)

    def sample(self):
        return float(self.rng.normal(self.mean, self.sigma))

    def sample_array(self, k):
        return self.rng.normal(self.mean, self.sigma, size=k)


class Bernoulli(RandomVariable):
    identifier = "bernoulli"

    def __init__(self, p, rng):
        if not 0.0 <= p <= 1.0:
            raise InvalidParameter("p", "must be in [0, 1]")
        super().__init__(rng)
        self.p = float(p)

    def sample(self):
        return 1.0 if self.rng.random() < self.p else 0.0

    def sample_array(self, k):
        return (self.rng.random(k) < self.p).astype(np.float64)


def _stream(params, identifier, streams):
    name = params.pop("stream", None) or f"rv.{identifier}"
    return streams.generator(name)


def make_constant(params, streams):
    p = take(params, {"c": (real(), 0.0), "stream": (string, "")})
    return Constant(p["c"])


def make_uniform(params, streams):
    p = take(params, {"lo": (real(), 0.0), "hi": (real(), 1.0), "stream": (string, "")})
    return Uniform(p["lo"], p["hi"], _stream(p, "uniform", streams))


def make_normal(params, streams):
    p = take(params, {"mean": (real(), 0.0), "sigma": (real(lo=0.0), 1.0),
                      "stream": (string, "")})
    return Normal(p["mean"], p["sigma"], _stream(p, "normal", streams))


def make_bernoulli(params, streams):
    p = take(params, {"p": (real(lo=0.0, hi=1.0), 0.5), "stream": (string, "")})
    return Bernoulli(p["p"], _stream(p, "bernoulli", streams))
