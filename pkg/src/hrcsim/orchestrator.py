"""Scenario generalization pipeline.

Simple scenarios (one robot) run the detailed model directly with
``gci = ci``.  Complex ones first harvest mean task durations from a
single-robot detailed run, feed them to the service model to estimate
GCI/OR/WT, and then simulate one robot with those coupling parameters.
"""
from __future__ import annotations

import enum
import functools
import json
import logging
import math
from dataclasses import dataclass, field, replace
from statistics import mean

from .agents import HifiResult, run_hifi
from .config import KeyParams, ScenarioConfig
from .environment import bricks_per_layer, brick_position, distance
from .lofi import (EstimationError, LofiConfig, get_checked_interval, occupied_rate,
                   run_lofi, waiting_time)

log = logging.getLogger(__name__)

KINDS = ("t_check", "t_supply_temp", "t_supply_long")


class ScenarioKind(str, enum.Enum):
    SIMPLE = "SimpleSingleRobot"
    MULTI_SINGLE_BS = "MultiRobotSingleBS"
    MULTI_MULTI_BS = "MultiRobotMultiBS"


@dataclass(frozen=True)
class ScenarioClass:
    kind: ScenarioKind
    n_robots: int
    n_bs_workers: int
    sensors: bool

    @property
    def is_complex(self) -> bool:
        return self.kind is not ScenarioKind.SIMPLE


def classify(cfg: ScenarioConfig) -> ScenarioClass:
    if cfg.n_robots == 1:
        kind = ScenarioKind.SIMPLE
    elif cfg.n_bs_workers == 1:
        kind = ScenarioKind.MULTI_SINGLE_BS
    else:
        kind = ScenarioKind.MULTI_MULTI_BS
    return ScenarioClass(kind, cfg.n_robots, cfg.n_bs_workers, cfg.sensors)


@dataclass(frozen=True)
class DurationStats:
    t_check: float
    t_supply_temp: float
    t_supply_long: float
    sample_counts: dict = field(default_factory=dict, compare=False)
    fallback: tuple = ()


def analytic_durations(cfg: ScenarioConfig) -> dict[str, float]:
    """Mean-speed estimates used when a kind never occurs in the calibration run."""
    lay = cfg.layout
    w = cfg.worker
    home = lay.temp_store.center
    # mean distance from the temp store to the bricks, weighted by bricks laid
    tot = 0.0
    n = 0
    for wall in lay.walls:
        m = bricks_per_layer(wall, cfg.brick)
        step = max(1, m // 20)
        pts = [brick_position(wall, 0, i, cfg.brick) for i in range(0, m, step)]
        d = sum(distance(home, p) for p in pts) / len(pts)
        tot += d * m * wall.num_layers
        n += m * wall.num_layers
    d_robot = tot / n
    d_lt = distance(home, lay.long_term_store.center)
    to_robot = w.grab_duration + d_robot / w.carry_velocity + w.supplement_duration
    return {
        "t_check": d_robot / w.walk_velocity + w.check_duration,
        "t_supply_temp": to_robot,
        "t_supply_long": d_lt / w.walk_velocity + w.grab_duration + d_lt / w.carry_velocity
        + w.drop_duration + to_robot,
    }


def _calibration_config(cfg: ScenarioConfig) -> ScenarioConfig:
    return replace(cfg, n_robots=1, n_bs_workers=1, key_params=None)


@functools.lru_cache(maxsize=256)
def _collect(cfg: ScenarioConfig) -> DurationStats:
    floor = cfg.lofi.min_samples
    pooled: dict[str, list[float]] = {k: [] for k in KINDS}
    # extra seeds are drawn until every kind reaches the floor or stays absent
    for i in range(cfg.lofi.seeds):
        res = run_hifi(cfg, seed=cfg.seed + i, key_params=KeyParams(cfg.strategy.ci))
        for k in KINDS:
            pooled[k].extend(res.samples[k])
        if all(len(v) >= floor or (i > 0 and not v) for v in pooled.values()):
            break
    est = None
    values = {}
    fallback = []
    for k in KINDS:
        if pooled[k]:
            if len(pooled[k]) < floor:
                log.warning("only %d samples of %s (floor %d)", len(pooled[k]), k, floor)
            values[k] = mean(pooled[k])
        else:
            est = est or analytic_durations(cfg)
            values[k] = est[k]
            fallback.append(k)
            log.warning("no %s samples in the calibration run; using the analytic estimate %.1f s",
                        k, est[k])
    return DurationStats(values["t_check"], values["t_supply_temp"],
                         values["t_supply_long"], {k: len(v) for k, v in pooled.items()},
                         tuple(fallback))


def collect_durations(cfg: ScenarioConfig) -> DurationStats:
    return _collect(_calibration_config(cfg))


def lofi_config(cfg: ScenarioConfig, stats: DurationStats, seed: int) -> LofiConfig:
    return LofiConfig(
        n_robots=cfg.n_robots, n_bs_workers=cfg.n_bs_workers,
        t_check=stats.t_check, t_supply_temp=stats.t_supply_temp,
        t_supply_long=stats.t_supply_long, consume_interval=cfg.robot.lay_duration,
        capacity=cfg.robot.capacity, sl=cfg.strategy.sl, ci=cfg.strategy.ci,
        sensors=cfg.sensors, horizon=cfg.lofi.horizon_days * cfg.time.day_length, seed=seed)


def generalize(cfg: ScenarioConfig) -> KeyParams:
    """Coupling parameters of ``cfg``; averaged over the configured lofi seeds.

    When no check ever reaches a robot (every supplement is answered to a
    request) the robots are never checked and GCI is infinite.
    """
    if not classify(cfg).is_complex:
        return KeyParams(cfg.strategy.ci)
    stats = collect_durations(cfg)
    gcis, ors, wts = [], [], []
    served = 0
    for i in range(cfg.lofi.seeds):
        rl = run_lofi(lofi_config(cfg, stats, cfg.seed + i))
        ors.append(occupied_rate(rl))
        wts.append(waiting_time(rl))
        served += rl.check_supplies + rl.request_supplies
        try:
            gcis.append(get_checked_interval(rl))
        except EstimationError:
            pass
    if not gcis:
        if not served:
            raise EstimationError("service model produced no checks and no supplements")
        gci = math.inf
    else:
        gci = mean(gcis)
    return KeyParams(gci, mean(ors), mean(wts))


class SimulationTimeout(RuntimeError):
    def __init__(self, report: "ProductivityReport"):
        self.report = report
        super().__init__(f"{len(report.timeouts)} replication(s) exceeded {report.max_days} days")


@dataclass
class ProductivityReport:
    scenario: ScenarioClass
    sl: int
    ci: float
    key_params: KeyParams
    runs: list[dict]
    max_days: int
    timeouts: list[int] = field(default_factory=list)

    @property
    def hours(self) -> list[float]:
        return [r["hours"] for r in self.runs]

    @property
    def mean_hours(self) -> float:
        return mean(self.hours)

    @property
    def min_hours(self) -> float:
        return min(self.hours)

    @property
    def max_hours(self) -> float:
        return max(self.hours)

    @property
    def bricks_per_day(self) -> float:
        return mean(r["bricks_per_day"] for r in self.runs)

    @property
    def fleet_bricks_per_day(self) -> float:
        return self.bricks_per_day * self.scenario.n_robots

    def aggregate(self) -> dict:
        return {
            "scenario": self.scenario.kind.value,
            "n_robots": self.scenario.n_robots,
            "n_bs_workers": self.scenario.n_bs_workers,
            "sensors": self.scenario.sensors,
            "sl": self.sl, "ci": self.ci,
            "gci": self.key_params.gci, "or": self.key_params.occupied_rate,
            "wt": self.key_params.wt,
            "reps": len(self.runs),
            "mean_hours": self.mean_hours, "min_hours": self.min_hours,
            "max_hours": self.max_hours,
            "bricks_per_day": self.bricks_per_day,
            "fleet_bricks_per_day": self.fleet_bricks_per_day,
            "breakdowns": mean(r["breakdowns"] for r in self.runs),
            "rest_minutes": mean(r["rest_minutes"] for r in self.runs),
            "timeouts": list(self.timeouts),
        }

    def to_text(self) -> str:
        lines = [json.dumps({"replication": r}, sort_keys=True) for r in self.runs]
        lines.append(json.dumps({"aggregate": self.aggregate()}, sort_keys=True))
        return "\n".join(lines) + "\n"


def _run_record(res: HifiResult) -> dict:
    return {
        "seed": res.seed, "completed": res.completed, "hours": res.hours,
        "bricks_per_day": res.bricks_per_day, "breakdowns": res.breakdowns,
        "rest_minutes": sum(res.rest_minutes.values()),
        "supplies": dict(sorted(res.supplies.items())),
    }


def _rep(args) -> dict:
    cfg, seed, kp = args
    return _run_record(run_hifi(cfg, seed=seed, key_params=kp))


def simulate(cfg: ScenarioConfig, reps: int | None = None, jobs: int = 1) -> ProductivityReport:
    reps = cfg.reps if reps is None else reps
    if reps < 1:
        raise ValueError("reps must be >= 1")
    cls = classify(cfg)
    kp = cfg.key_params or generalize(cfg)
    tasks = [(cfg, cfg.seed + i, kp) for i in range(reps)]
    if jobs > 1 and reps > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            runs = list(ex.map(_rep, tasks))
    else:
        runs = [_rep(t) for t in tasks]
    rep = ProductivityReport(cls, cfg.strategy.sl, cfg.strategy.ci, kp, runs, cfg.time.max_days,
                             [r["seed"] for r in runs if not r["completed"]])
    if rep.timeouts:
        raise SimulationTimeout(rep)
    return rep

