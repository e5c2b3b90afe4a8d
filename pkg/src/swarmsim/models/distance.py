"""Node distance estimate models."""
import math

from .params import real, string, take


class DistanceEstimateModel:
    identifier = ""

    def bind(self, world, comm):
        self.world = world
        self.comm = comm

    def true_distance(self, u, v):
        return math.dist(self.world._positions[u], self.world._positions[v])

    def estimate_distance(self, u, v):
        """Estimated distance, or None when the pair cannot communicate."""
        if not self.comm.can_communicate(u, v):
            return None
        return self._estimate(u, v)

    def _estimate(self, u, v):
        raise NotImplementedError


class PerfectDistance(DistanceEstimateModel):
    identifier = "perfect"

    def _estimate(self, u, v):
        return self.true_distance(u, v)


class NoisyDistance(DistanceEstimateModel):
    """True distance plus zero-mean normal error, clamped to be non-negative."""

    identifier = "noisy"

    def __init__(self, sigma, rng):
        self.sigma = float(sigma)
        self.rng = rng

    def _estimate(self, u, v):
        return max(0.0, self.true_distance(u, v) + float(self.rng.normal(0.0, self.sigma)))


class NoDistance(DistanceEstimateModel):
    identifier = "none"

    def estimate_distance(self, u, v):
        self.world.check_node(u)
        self.world.check_node(v)
        return None


def make_perfect(params, streams):
    take(params, {})
    return PerfectDistance()


def make_noisy(params, streams):
    p = take(params, {"sigma": (real(lo=0.0), 0.1), "stream": (string, "")})
    return NoisyDistance(p["sigma"], streams.generator(p["stream"] or "distance.noisy"))


def make_none(params, streams):
    take(params, {})
    return NoDistance()
