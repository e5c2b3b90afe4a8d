"""Random rectangular deployments and the node-density formula."""
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameter
from .models.randomvars import StreamFactory

PLACEMENT_STREAM = "placement"


@dataclass(frozen=True)
class ScenarioSpec:
    count: int
    width: float
    height: float
    seed: int = 0
    placement: str = "uniform"

    def __post_init__(self):
        if int(self.count) != self.count or self.count <= 0:
            raise InvalidParameter("count", "must be a positive integer")
        for key in ("width", "height"):
            value = getattr(self, key)
            if not math.isfinite(value) or value <= 0:
                raise InvalidParameter(key, "must be positive")
        if self.placement != "uniform":
            raise InvalidParameter("placement", f"unknown placement {self.placement!r}")


def generate_rect_world(spec: ScenarioSpec) -> np.ndarray:
    """``(count, 3)`` positions, i.i.d. uniform over the rectangle, z = 0."""
    rng = StreamFactory(spec.seed).generator(PLACEMENT_STREAM)
    pos = np.zeros((spec.count, 3))
    xy = rng.random((spec.count, 2))
    pos[:, 0] = xy[:, 0] * spec.width
    pos[:, 1] = xy[:, 1] * spec.height
    return pos


def density(count, width, height, range_=1.0) -> float:
    """Expected number of nodes inside one broadcast disk."""
    return count * math.pi * range_ * range_ / (width * height)
