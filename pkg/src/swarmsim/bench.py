"""Metric rows, CSV output and the benchmark sweep."""
import csv
import re
from dataclasses import dataclass

from .errors import InvalidParameter
from .models import build_model_set
from .models.randomvars import derive_seed
from .scenario import ScenarioSpec, density

CSV_COLUMNS = [
    "nodes", "width", "height", "density", "edge_model", "transmission_model", "rounds",
    "msgs_sent", "msgs_delivered", "msgs_dropped", "adjacency_entries_peak", "wall_ms",
]


def metrics_row(world, wall_ms=None):
    """Raw values of one CSV row for ``world`` (``wall_ms`` overrides the timer)."""
    m = world.metrics
    width, height = world.size_hint
    range_ = world.models.communication.range or 1.0
    dens = density(world.node_count, width, height, range_) if width and height else 0.0
    names = world.models.names
    if wall_ms is None:
        wall_ms = int(round(m.wall_clock_ms))
    return {
        "nodes": world.node_count,
        "width": width,
        "height": height,
        "density": dens,
        "edge_model": names.get("edge_model", type(world.models.edge).__name__),
        "transmission_model": names.get("transmission_model",
                                        type(world.models.transmission).__name__),
        "rounds": m.rounds_executed,
        "msgs_sent": m.messages_sent,
        "msgs_delivered": m.messages_delivered,
        "msgs_dropped": m.messages_dropped,
        "adjacency_entries_peak": m.adjacency_entries_peak,
        "wall_ms": int(wall_ms),
    }


def _cell(value):
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def write_csv(rows, fh):
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow([_cell(row[c]) for c in CSV_COLUMNS])


def summary_line(row):
    return (f"{row['nodes']} nodes {_cell(row['width'])}x{_cell(row['height'])} "
            f"density {row['density']:.1f} [{row['edge_model']}/{row['transmission_model']}]: "
            f"{row['rounds']} rounds, sent {row['msgs_sent']}, "
            f"delivered {row['msgs_delivered']}, dropped {row['msgs_dropped']}, "
            f"adjacency peak {row['adjacency_entries_peak']}, {row['wall_ms']} ms")


def report(controller, wall_ms=None):
    world = controller.require_world()
    if wall_ms is None and not controller.timing:
        wall_ms = 0
    row = metrics_row(world, wall_ms)
    controller.rows.append(row)
    controller.say(summary_line(row))
    return row


def run_timesync_case(controller, settings, seed=None, budget_s=None):
    """One time-stamp broadcast run on a fresh random world; returns its CSV row."""
    from .tasks import BudgetExceeded, make_world, populate, simulate

    seed = controller.seed if seed is None else seed
    settings = dict(settings)
    settings["processor"] = "timesync"
    world = make_world(controller, settings, seed)
    populate(world, settings, seed)
    controller.world = world
    try:
        simulate(world, budget_s=budget_s)
    except (BudgetExceeded, MemoryError) as exc:
        controller.say(f"timesync_case aborted: {exc or type(exc).__name__}")
        return report(controller, wall_ms=-1)
    return report(controller)


@dataclass(frozen=True)
class BenchRow:
    count: int
    width: float
    height: float
    edge_model: str = "list"
    transmission_model: str = "reliable"

    def settings(self):
        return {"count": self.count, "width": self.width, "height": self.height,
                "edge_model": self.edge_model, "transmission_model": self.transmission_model}


_ROW = re.compile(r"\s*(\d+):([0-9.eE+-]+):([0-9.eE+-]+)(?::(\w+))?(?::(\w+))?\s*\Z")


def parse_rows(text):
    """Rows written as ``count:width:height[:edge_model[:transmission_model]]``,
    separated by commas."""
    rows = []
    for part in text.split(","):
        if not part.strip():
            continue
        m = _ROW.match(part)
        if not m:
            raise InvalidParameter("rows", f"cannot parse row {part!r}")
        try:
            rows.append(BenchRow(int(m[1]), float(m[2]), float(m[3]),
                                 m[4] or "list", m[5] or "reliable"))
        except ValueError:
            raise InvalidParameter("rows", f"cannot parse row {part!r}") from None
    return rows


def bench_sweep(controller, rows, repetitions=1, budget_s=None, settings=None):
    """Run every row ``repetitions`` times on fresh worlds.

    Row ``i``, repetition ``j`` runs with seed ``derive_seed(seed, i, j)``.
    Everything is validated before the first run; a row that exceeds the
    per-row time budget is recorded with ``wall_ms = -1`` and the sweep
    carries on.
    """
    rows = list(rows)
    if not rows:
        raise InvalidParameter("rows", "at least one row is required")
    base = dict(settings or {})
    for key in ("rows", "repetitions", "budget_s"):
        base.pop(key, None)
    merged = []
    for row in rows:
        s = dict(base)
        s.update(row.settings())
        ScenarioSpec(s["count"], s["width"], s["height"])
        build_model_set(s, 0, controller.registry)
        merged.append(s)
    out = []
    for i, s in enumerate(merged):
        for j in range(repetitions):
            seed = derive_seed(controller.seed, i, j)
            out.append(run_timesync_case(controller, s, seed, budget_s))
    return out
