"""SL x CI campaigns, sensor comparisons, validation and result files."""
from __future__ import annotations

import csv
import io
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from statistics import mean

from .config import ScenarioConfig
from .orchestrator import ProductivityReport, SimulationTimeout, simulate

log = logging.getLogger(__name__)

CI_VALUES = (100, 200, 300, 800, 1300, 1800, 2300, 2800, 3300, 3800)
SL_VALUES = (50, 100, 150, 200, 250, 300)
SENSOR_SL_VALUES = (50, 100, 150, 200, 250)

BAND = (2000.0, 3000.0)
REFERENCE_RATE = 2380.0
REFERENCE_TOL = 0.15

CSV_HEADER = ("sl", "ci", "mean_hours", "min_hours", "max_hours", "reps")


@dataclass
class Cell:
    sl: int
    ci: float
    hours: list[float]
    gci: float | None = None
    occupied_rate: float | None = None
    wt: float | None = None
    breakdowns: float = 0.0
    timed_out: bool = False

    @property
    def mean(self) -> float:
        return mean(self.hours) if self.hours else math.nan

    @property
    def min(self) -> float:
        return min(self.hours) if self.hours else math.nan

    @property
    def max(self) -> float:
        return max(self.hours) if self.hours else math.nan


@dataclass
class SweepGrid:
    sl_values: tuple[int, ...]
    ci_values: tuple[float, ...]
    cells: dict[tuple[int, float], Cell] = field(default_factory=dict)
    label: str = ""

    def value(self, sl, ci) -> float:
        return self.cells[(sl, ci)].mean

    def row(self, sl) -> list[float]:
        return [self.value(sl, ci) for ci in self.ci_values]

    def column(self, ci) -> list[float]:
        return [self.value(sl, ci) for sl in self.sl_values]


def default_sl_values(sensors: bool, include_sl300: bool = False) -> tuple[int, ...]:
    # with sensors and SL = capacity the alert fires right after every refill
    return SL_VALUES if (not sensors or include_sl300) else SENSOR_SL_VALUES


def _cell(args) -> Cell:
    cfg, reps = args
    sl, ci = cfg.strategy.sl, cfg.strategy.ci
    try:
        rep = simulate(cfg, reps)
        timed_out = False
    except SimulationTimeout as e:
        rep = e.report
        timed_out = True
        log.warning("cell sl=%s ci=%s: %s", sl, ci, e)
    kp = rep.key_params
    return Cell(sl, ci, rep.hours, kp.gci, kp.occupied_rate, kp.wt,
                mean(r["breakdowns"] for r in rep.runs), timed_out)


def run_sweep(base: ScenarioConfig, sl_values=None, ci_values=None, reps: int | None = None,
              jobs: int = 1, include_sl300: bool = False, progress=None) -> SweepGrid:
    sl_values = tuple(sl_values or default_sl_values(base.sensors, include_sl300))
    ci_values = tuple(ci_values or CI_VALUES)
    reps = base.reps if reps is None else reps
    tasks = [(base.with_strategy(sl, ci), reps) for sl in sl_values for ci in ci_values]
    grid = SweepGrid(sl_values, ci_values, label=_label(base))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = ex.map(_cell, tasks)
            for c in results:
                grid.cells[(c.sl, c.ci)] = c
                if progress:
                    progress(c)
    else:
        for t in tasks:
            c = _cell(t)
            grid.cells[(c.sl, c.ci)] = c
            if progress:
                progress(c)
    return grid


def _label(cfg: ScenarioConfig) -> str:
    s = "sensors" if cfg.sensors else "no-sensors"
    return f"{cfg.n_robots}R/{cfg.n_bs_workers}BS {s}"


@dataclass
class ImprovementGrid:
    sl_values: tuple[int, ...]
    ci_values: tuple[float, ...]
    cells: dict[tuple[int, float], float]

    @property
    def mean(self) -> float:
        return mean(self.cells.values())

    def best(self) -> tuple[tuple[int, float], float]:
        key = max(self.cells, key=lambda k: (self.cells[k], k))
        return key, self.cells[key]


def improvement_grid(base: SweepGrid, with_sensors: SweepGrid) -> ImprovementGrid:
    out = {}
    for sl in with_sensors.sl_values:
        for ci in with_sensors.ci_values:
            a = base.cells.get((sl, ci))
            b = with_sensors.cells.get((sl, ci))
            if a is None or b is None or not a.hours or not b.hours:
                log.warning("cell sl=%s ci=%s missing from one grid; skipped", sl, ci)
                continue
            out[(sl, ci)] = 100.0 * (a.mean - b.mean) / a.mean
    sls = tuple(s for s in with_sensors.sl_values if any(k[0] == s for k in out))
    cis = tuple(c for c in with_sensors.ci_values if any(k[1] == c for k in out))
    return ImprovementGrid(sls, cis, out)


# trend checks ---------------------------------------------------------------
def step_violations(values, increasing: bool, tol: float = 0.01) -> list[int]:
    """Indices i where the step i -> i+1 breaks the trend by more than tol * value."""
    bad = []
    for i in range(len(values) - 1):
        a, b = values[i], values[i + 1]
        drop = (a - b) if increasing else (b - a)
        if drop > tol * a:
            bad.append(i)
    return bad


def ci_trend(values) -> str:
    if not step_violations(values, True):
        return "non-decreasing"
    lo = min(range(len(values)), key=values.__getitem__)
    if 0 < lo < len(values) - 1 and values[0] > values[lo] and values[-1] > values[lo]:
        return "decreases then rises"
    return "non-monotone"


# output ------------------------------------------------------------------------
def _fmt(x: float) -> str:
    return "nan" if math.isnan(x) else f"{x:.3f}"


def grid_csv(grid: SweepGrid) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for sl in grid.sl_values:
        for ci in grid.ci_values:
            c = grid.cells[(sl, ci)]
            w.writerow([sl, _num(ci), _fmt(c.mean), _fmt(c.min), _fmt(c.max), len(c.hours)])
    return buf.getvalue()


def improvement_csv(imp: ImprovementGrid) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("sl", "ci", "improvement_pct"))
    for (sl, ci), v in sorted(imp.cells.items()):
        w.writerow([sl, _num(ci), _fmt(v)])
    return buf.getvalue()


def _num(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(float(x))


def contour_text(grid) -> str:
    """Matrix layout: header row of CI values, one row per SL."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["sl\\ci", *(_num(c) for c in grid.ci_values)])
    for sl in grid.sl_values:
        vals = []
        for ci in grid.ci_values:
            v = grid.cells.get((sl, ci))
            v = v.mean if isinstance(v, Cell) else (math.nan if v is None else v)
            vals.append(_fmt(v))
        w.writerow([sl, *vals])
    return buf.getvalue()


def summary_text(grid) -> str:
    lines = []
    if isinstance(grid, ImprovementGrid):
        (sl, ci), v = grid.best()
        lines.append(f"improvement grid: mean {grid.mean:.2f}%")
        lines.append(f"largest improvement {v:.2f}% at sl={sl} ci={_num(ci)}")
        return "\n".join(lines) + "\n"
    if grid.label:
        lines.append(f"scenario: {grid.label}")
    done = {k: c for k, c in grid.cells.items() if c.hours}
    (sl, ci) = min(done, key=lambda k: (done[k].mean, k))
    lines.append(f"best cell: sl={sl} ci={_num(ci)} mean {done[(sl, ci)].mean:.3f} h")
    for s in grid.sl_values:
        lines.append(f"sl={s}: CI trend {ci_trend(grid.row(s))}")
    for c in grid.ci_values:
        bad = step_violations(grid.column(c), increasing=False)
        lines.append(f"ci={_num(c)}: SL trend {'non-increasing' if not bad else 'non-monotone'}")
    timeouts = [k for k, c in grid.cells.items() if c.timed_out]
    if timeouts:
        lines.append("timed out cells: " + ", ".join(f"(sl={a}, ci={_num(b)})" for a, b in timeouts))
    return "\n".join(lines) + "\n"


def render(grid, fmt: str) -> str:
    if fmt == "csv":
        return improvement_csv(grid) if isinstance(grid, ImprovementGrid) else grid_csv(grid)
    if fmt == "contour":
        return contour_text(grid)
    if fmt == "summary":
        return summary_text(grid)
    raise ValueError(f"unknown format {fmt!r}")


def emit_results(grid, fmt: str, out: str | Path | None = None, name: str = "grid") -> str:
    """Render ``grid``; when ``out`` is a directory, also write it to a file there."""
    text = render(grid, fmt)
    if out is not None:
        ext = {"csv": "csv", "contour": "contour.csv", "summary": "txt"}[fmt]
        path = Path(out)
        path.mkdir(parents=True, exist_ok=True)
        (path / f"{name}.{ext}").write_text(text)
    return text


# validation ---------------------------------------------------------------------
@dataclass
class ValidationReport:
    report: ProductivityReport
    band: tuple[float, float] = BAND

    @property
    def bricks_per_day(self) -> float:
        return self.report.bricks_per_day

    @property
    def in_band(self) -> bool:
        return self.band[0] <= self.bricks_per_day <= self.band[1]

    @property
    def near_reference(self) -> bool:
        return abs(self.bricks_per_day - REFERENCE_RATE) <= REFERENCE_TOL * REFERENCE_RATE

    @property
    def ok(self) -> bool:
        return self.in_band and self.near_reference

    def text(self) -> str:
        r = self.report
        return (f"validation: {self.bricks_per_day:.1f} bricks/day over {len(r.runs)} reps "
                f"(mean {r.mean_hours:.2f} h, min {r.min_hours:.2f}, max {r.max_hours:.2f})\n"
                f"band [{self.band[0]:.0f}, {self.band[1]:.0f}]: {'PASS' if self.in_band else 'FAIL'}\n"
                f"reference {REFERENCE_RATE:.0f} +/- {REFERENCE_TOL:.0%}: "
                f"{'PASS' if self.near_reference else 'FAIL'}\n")


def validation_config(cfg: ScenarioConfig | None = None) -> ScenarioConfig:
    cfg = cfg or ScenarioConfig()
    return replace(cfg.with_strategy(300, 100), n_robots=1, n_bs_workers=1, sensors=False,
                   key_params=None)


def validate(cfg: ScenarioConfig | None = None, reps: int | None = None, jobs: int = 1) -> ValidationReport:
    return ValidationReport(simulate(validation_config(cfg), reps, jobs))
