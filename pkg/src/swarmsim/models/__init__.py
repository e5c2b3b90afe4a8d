"""Exchangeable model implementations, selectable by identifier."""
from ..errors import UnknownIdentifier
from . import communication, distance, edge, randomvars, transmission
from .communication import CommunicationModel, DiscGraph, PairListCommunication
from .distance import DistanceEstimateModel, NoDistance, NoisyDistance, PerfectDistance
from .edge import CachedEdgeModel, EdgeModel, ListEdgeModel, SimpleEdgeModel, SpatialGrid
from .randomvars import RandomVariable, StreamFactory, derive_seed
from .transmission import Delay, RandomDrop, Reliable, TransmissionModel

FAMILIES = ("communication", "edge", "transmission", "random_variable", "distance_estimate")

# config-file spelling of each family
CONFIG_KEYS = {
    "comm_model": "communication",
    "edge_model": "edge",
    "transmission_model": "transmission",
    "random_variable": "random_variable",
    "distance_estimate": "distance_estimate",
}

DEFAULTS = {
    "comm_model": "disc_graph",
    "edge_model": "list",
    "transmission_model": "reliable",
    "random_variable": "uniform",
    "distance_estimate": "perfect",
}


class ModelRegistry:
    """Per-family map from identifier to factory ``f(params, streams)``."""

    def __init__(self):
        self._factories = {f: {} for f in FAMILIES}

    def _family(self, family):
        family = CONFIG_KEYS.get(family, family)
        if family not in self._factories:
            raise UnknownIdentifier(f"unknown model family {family!r}")
        return family

    def register(self, family, identifier, factory):
        table = self._factories[self._family(family)]
        if identifier in table:
            raise ValueError(f"{family} model {identifier!r} already registered")
        table[identifier] = factory

    def identifiers(self, family):
        return sorted(self._factories[self._family(family)])

    def create(self, family, identifier, params=None, streams=None):
        family = self._family(family)
        try:
            factory = self._factories[family][identifier]
        except KeyError:
            raise UnknownIdentifier(f"no {family} model named {identifier!r}") from None
        return factory(dict(params or {}), streams if streams is not None else StreamFactory(0))


registry = ModelRegistry()
for _family, _ident, _factory in [
    ("communication", "disc_graph", communication.make_disc_graph),
    ("edge", "list", edge.make_list),
    ("edge", "simple", edge.make_simple),
    ("edge", "cached", edge.make_cached),
    ("transmission", "reliable", transmission.make_reliable),
    ("transmission", "random_drop", transmission.make_random_drop),
    ("transmission", "delay", transmission.make_delay),
    ("random_variable", "uniform", randomvars.make_uniform),
    ("random_variable", "normal", randomvars.make_normal),
    ("random_variable", "bernoulli", randomvars.make_bernoulli),
    ("random_variable", "constant", randomvars.make_constant),
    ("distance_estimate", "perfect", distance.make_perfect),
    ("distance_estimate", "noisy", distance.make_noisy),
    ("distance_estimate", "none", distance.make_none),
]:
    registry.register(_family, _ident, _factory)


def model_params(settings, key):
    """Parameters addressed to one family: ``<key>.<name>=value`` entries."""
    prefix = key + "."
    return {k[len(prefix):]: v for k, v in settings.items() if k.startswith(prefix)}


def build_model_set(settings=None, seed=0, reg=None):
    """A ModelSet from config-style settings.

    ``settings`` maps family keys (``edge_model``...) to identifiers and
    ``<family key>.<param>`` to model parameters; missing families use
    DEFAULTS.
    """
    from ..world import ModelSet

    settings = dict(settings or {})
    reg = reg or registry
    streams = StreamFactory(seed)
    names = {k: settings.get(k, d) for k, d in DEFAULTS.items()}
    built = {k: reg.create(CONFIG_KEYS[k], names[k], model_params(settings, k), streams)
             for k in DEFAULTS}
    return ModelSet(communication=built["comm_model"], edge=built["edge_model"],
                    transmission=built["transmission_model"],
                    distance=built["distance_estimate"],
                    random_variable=built["random_variable"], names=names)


__all__ = [
    "FAMILIES", "CONFIG_KEYS", "DEFAULTS", "ModelRegistry", "registry", "build_model_set",
    "model_params", "StreamFactory", "derive_seed", "RandomVariable", "CommunicationModel",
    "DiscGraph", "PairListCommunication", "EdgeModel", "ListEdgeModel", "SimpleEdgeModel",
    "CachedEdgeModel", "SpatialGrid", "TransmissionModel", "Reliable", "RandomDrop", "Delay",
    "DistanceEstimateModel", "PerfectDistance", "NoisyDistance", "NoDistance",
]
