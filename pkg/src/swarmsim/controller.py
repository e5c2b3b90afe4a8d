"""Simulation controller: runs configured tasks against one world."""
import logging
import sys

from . import models
from .errors import DuplicateTask, MissingParameter, UnknownTask, WorldMissing
from .metrics import Metrics
from .models.randomvars import StreamFactory
from .world import tag_type

log = logging.getLogger(__name__)

_REQUIRED = object()


class Params:
    """Invocation parameters layered over the controller's global environment."""

    def __init__(self, invocation, env):
        self.invocation = dict(invocation or {})
        self.env = env

    def __contains__(self, key):
        return key in self.invocation or key in self.env

    def get(self, key, default=None):
        if key in self.invocation:
            return self.invocation[key]
        return self.env.get(key, default)

    def require(self, key):
        if key not in self:
            raise MissingParameter(key)
        return self.get(key)

    def merged(self):
        out = dict(self.env)
        out.update(self.invocation)
        return out


class SimulationTask:
    """A named procedure with full access to the controller and its world."""

    name = ""

    def run(self, controller, params: Params):
        raise NotImplementedError


class FunctionTask(SimulationTask):
    def __init__(self, name, fn, doc=None):
        self.name = name
        self.fn = fn
        self.__doc__ = doc or fn.__doc__

    def run(self, controller, params):
        return self.fn(controller, params)

    def __repr__(self):
        return f"FunctionTask({self.name!r})"


class SimulationController:
    """Owns the task and model registries, the global environment and the world.

    ``seed`` given here (e.g. from the command line) takes precedence over a
    ``seed`` entry in the environment; with neither, the seed is 0.
    """

    def __init__(self, seed=None, registry=None, timing=True, stdout=None):
        self.env = {}
        self.pinned = set()
        self.seed_override = seed
        self.registry = registry or models.registry
        self.timing = timing
        self.stdout = stdout if stdout is not None else sys.stdout
        self.tasks = {}
        self.world = None
        self.rows = []
        self.trace = []
        from .tasks import builtin_tasks

        for t in builtin_tasks():
            self.register_task(t)

    @property
    def seed(self):
        if self.seed_override is not None:
            return int(self.seed_override)
        return int(self.env.get("seed", 0))

    @property
    def metrics(self):
        return self.world.metrics if self.world is not None else Metrics()

    def streams(self, seed=None):
        return StreamFactory(self.seed if seed is None else seed)

    def set_param(self, key, value, pin=False):
        """Set a global parameter. Pinned keys ignore later ``set`` tasks."""
        self.env[key] = value
        if pin:
            self.pinned.add(key)

    def require_world(self):
        if self.world is None:
            raise WorldMissing("no world has been prepared")
        return self.world

    def register_task(self, task):
        if task.name in self.tasks:
            raise DuplicateTask(f"task {task.name!r} already registered")
        self.tasks[task.name] = task

    def run_task(self, name, params=None):
        try:
            task = self.tasks[name]
        except KeyError:
            raise UnknownTask(f"no task named {name!r}") from None
        self.trace.append(("start", name))
        result = task.run(self, Params(params, self.env)) or {}
        self.trace.append(("end", name))
        if self.world is not None:
            for key, value in result.items():
                try:
                    tag_type(value)
                except TypeError:
                    continue
                self.world.global_tags.set(f"task.{name}.{key}", value, persistent=False)
        return result

    def run_program(self, program):
        for inv in program:
            log.debug("line %d: %s %s", inv.line, inv.name, inv.params)
            self.run_task(inv.name, inv.params)

    def say(self, text):
        print(text, file=self.stdout)
