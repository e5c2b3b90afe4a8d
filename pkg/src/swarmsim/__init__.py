"""Discrete-event simulator for large wireless sensor networks."""
from .errors import SimulationError
from .models import build_model_set, registry
from .scheduler import EventScheduler
from .world import (
    ACTIVE,
    INACTIVE,
    SLEEPING,
    EnvelopeBatch,
    MessageEnvelope,
    ModelSet,
    Node,
    Position,
    Processor,
    ProcessorState,
    TagMap,
    World,
)

__version__ = "0.1.0"

__all__ = [
    "ACTIVE", "INACTIVE", "SLEEPING", "EnvelopeBatch", "EventScheduler", "MessageEnvelope",
    "ModelSet", "Node", "Position", "Processor", "ProcessorState", "SimulationError",
    "TagMap", "World", "build_model_set", "registry",
]
