"""Built-in simulation tasks."""
import time

from . import bench, persistence, timesync
from .controller import FunctionTask
from .errors import InvalidParameter, SimulationError
from .models import build_model_set
from .models.params import integer, real, string
from .scenario import ScenarioSpec, generate_rect_world
from .world import World

_BUILTINS = []


def _task(name):
    def deco(fn):
        _BUILTINS.append((name, fn))
        return fn
    return deco


def builtin_tasks():
    return [FunctionTask(name, fn) for name, fn in _BUILTINS]


class BudgetExceeded(SimulationError):
    pass


PROCESSORS = ("none", "timesync")


def make_world(controller, settings, seed=None):
    seed = controller.seed if seed is None else seed
    width = real(lo=0.0)("width", settings.get("width", 0.0))
    height = real(lo=0.0)("height", settings.get("height", 0.0))
    return World(width, height, build_model_set(settings, seed, controller.registry))


def make_processors(name, count, world, settings):
    """Per-node processor lists for a named processor kind (None for "none")."""
    if name == "none":
        return None
    if name == "timesync":
        group = timesync.make_group(
            count, world.models.random_variable,
            total_messages=integer(lo=0)("total_messages", settings.get(
                "total_messages", timesync.DEFAULT_TOTAL_MESSAGES)),
            send_period=integer(lo=1)("send_period", settings.get("send_period", 1)),
            size_bytes=integer(lo=0)("size_bytes", settings.get(
                "size_bytes", timesync.PAYLOAD.size)))
        return [[m] for m in group.members]
    raise InvalidParameter("processor", f"unknown processor {name!r}; known: {PROCESSORS}")


def populate(world, settings, seed):
    """Place ``count`` nodes uniformly in ``width`` x ``height`` and attach processors."""
    spec = ScenarioSpec(integer(lo=1)("count", settings["count"]),
                        real()("width", settings["width"]),
                        real()("height", settings["height"]), seed,
                        string("placement", settings.get("placement", "uniform")))
    world.size_hint = (spec.width, spec.height)
    positions = generate_rect_world(spec)
    procs = make_processors(string("processor", settings.get("processor", "none")),
                            spec.count, world, settings)
    world.add_nodes(positions, procs)
    return world


def simulate(world, max_rounds=None, budget_s=None):
    """Step rounds until the world is done; wall time is added to the metrics."""
    if max_rounds is not None:
        world.max_rounds = integer(lo=0)("max_rounds", max_rounds)
    t0 = time.perf_counter()
    try:
        while not world.is_done():
            world.step_round()
            if budget_s is not None and time.perf_counter() - t0 > budget_s:
                raise BudgetExceeded(f"round {world.round}: over the {budget_s} s budget")
    finally:
        world.metrics.wall_clock_ms += (time.perf_counter() - t0) * 1000.0
    return world.metrics


@_task("set")
def task_set(ctl, params):
    """Store every parameter in the global environment."""
    for key, value in params.invocation.items():
        if key in ctl.pinned:
            ctl.say(f"set: {key} is pinned from the command line, keeping {ctl.env[key]!r}")
            continue
        ctl.env[key] = value
    return dict(params.invocation)


@_task("prepare_world")
def task_prepare_world(ctl, params):
    """Create an empty world with the configured models."""
    ctl.world = make_world(ctl, params.merged())
    return {"width": ctl.world.size_hint[0], "height": ctl.world.size_hint[1]}


@_task("rect_world")
def task_rect_world(ctl, params):
    """Fill a fresh (or freshly prepared, still empty) world with random nodes."""
    for key in ("count", "width", "height"):
        params.require(key)
    settings = params.merged()
    world = ctl.world
    if world is None or world.started or world.node_count:
        world = make_world(ctl, settings)
    populate(world, settings, ctl.seed)
    ctl.world = world
    return {"count": world.node_count}


@_task("simulation")
def task_simulation(ctl, params):
    """Run rounds until every processor is inactive or ``max_rounds`` is reached."""
    world = ctl.require_world()
    budget = params.get("budget_s")
    return simulate(world, params.get("max_rounds"),
                    None if budget is None else real(lo=0.0)("budget_s", budget)).as_dict()


@_task("save_world")
def task_save_world(ctl, params):
    world = ctl.require_world()
    path = string("file", params.require("file"))
    persistence.save_world(world, path)
    return {"file": path}


@_task("load_world")
def task_load_world(ctl, params):
    settings = params.merged()
    path = string("file", params.require("file"))
    ctl.world = persistence.load_world(
        path, build_model_set(settings, ctl.seed, ctl.registry))
    return {"count": ctl.world.node_count, "round": ctl.world.round}


@_task("report")
def task_report(ctl, params):
    """Append one metrics row for the current world."""
    return bench.report(ctl)


@_task("timesync_case")
def task_timesync_case(ctl, params):
    """Build a random world of time-stamp broadcasters, run it, report one row."""
    for key in ("count", "width", "height"):
        params.require(key)
    budget = params.get("budget_s")
    return bench.run_timesync_case(ctl, params.merged(), budget_s=budget)


@_task("bench_sweep")
def task_bench_sweep(ctl, params):
    rows = bench.parse_rows(string("rows", params.require("rows")))
    reps = integer(lo=1)("repetitions", params.get("repetitions", 1))
    budget = params.get("budget_s")
    done = bench.bench_sweep(ctl, rows, reps, budget, params.merged())
    return {"rows": len(done)}
