"""One detailed run: a robot, its three workers, optional sensor and the working-hour clock."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from ..config import KeyParams, ScenarioConfig
from ..kernel import Kernel, RandomStream, TraceWriter
from .robot import Robot, Team
from .sensor import Sensor
from .workers import BSWorker, EMRWorker, OtherWorker
from .working_hour import WorkingHour


@dataclass
class HifiResult:
    seed: int
    completed: bool
    end_time: float                  # seconds until the last brick is laid
    total_bricks: int
    laid: int
    breakdowns: int
    proximity_stalls: int
    forgotten_checks: int
    delayed_responses: int
    alerts: int
    supplies: dict[str, int]
    rest_minutes: dict[str, float]
    samples: dict[str, list[float]] = field(repr=False)
    events: int = 0
    trace: str | None = field(default=None, repr=False)

    @property
    def hours(self) -> float:
        return self.end_time / 3600.0

    @property
    def bricks_per_day(self) -> float:
        return self.total_bricks * 24.0 / self.hours if self.end_time > 0 else 0.0


class HifiModel:
    def __init__(self, cfg: ScenarioConfig, seed: int | None = None,
                 key_params: KeyParams | None = None, trace: bool = False):
        self.cfg = cfg
        self.seed = cfg.seed if seed is None else seed
        self.rng = RandomStream(self.seed)
        self.trace = TraceWriter() if trace else None
        self.kernel = Kernel(self.trace)
        self.key_params = key_params or cfg.key_params or KeyParams(cfg.strategy.ci)
        self.strategy_sl = cfg.strategy.sl
        self.total_bricks = cfg.layout.total_bricks(cfg.brick)
        self.lt_stock = self.total_bricks
        self.temp_stock = 0
        self.laid = 0
        self.samples: dict[str, list[float]] = {"t_check": [], "t_supply_temp": [], "t_supply_long": []}
        self.supplies: Counter = Counter()
        self.forgotten_checks = 0
        self.delayed_responses = 0
        self.end_time: float | None = None
        self.timed_out = False

        store = cfg.layout.robot_store.center
        self.robot = Robot(self)
        self.bs = BSWorker(self, "bs", store)
        self.emr = EMRWorker(self, "emr", store)
        self.other = OtherWorker(self, "other", store)
        self.workers = [self.bs, self.emr, self.other]
        self.bs_ids = [self.bs.id]
        self.sensor = Sensor(self, self.bs_ids) if cfg.sensors else None
        self.team = Team(self)
        self.wh = WorkingHour(self, [w.id for w in self.workers], self.robot.id)
        k = self.kernel
        for a in [self.robot, *self.workers, self.wh]:
            k.register(a.id, a)
        if self.sensor is not None:
            k.register(self.sensor.id, self.sensor)

    def emit(self, agent: str, kind: str, **data) -> None:
        if self.trace is not None:
            self.trace.emit(self.kernel.now, agent, kind, **data)

    def finish(self) -> None:
        self.end_time = self.kernel.now
        self.emit("model", "complete", laid=self.laid)
        self.kernel.stop()

    def timeout(self) -> None:
        self.timed_out = True
        self.emit("model", "timeout", laid=self.laid)
        self.kernel.stop()

    def stocks(self) -> dict[str, int]:
        return {"long_term": self.lt_stock, "temp": self.temp_stock, "robot": self.robot.bricks,
                "transit": self.bs.carried, "laid": self.laid}

    def run(self) -> HifiResult:
        self.emit("model", "start", seed=self.seed, total=self.total_bricks,
                  gci=self.key_params.gci, occupied_rate=self.key_params.occupied_rate,
                  wt=self.key_params.wt, sl=self.cfg.strategy.sl, ci=self.cfg.strategy.ci,
                  capacity=self.robot.capacity, safety=self.robot.thr,
                  day_length=self.cfg.time.day_length, period=self.cfg.time.period,
                  positions={a.id: list(a.position(0.0)) for a in [self.robot, *self.workers]})
        self.wh.start()
        self.kernel.run()
        completed = self.end_time is not None
        end = self.end_time if completed else self.kernel.now
        return HifiResult(
            seed=self.seed, completed=completed, end_time=end,
            total_bricks=self.total_bricks, laid=self.laid,
            breakdowns=self.robot.breakdowns, proximity_stalls=self.robot.proximity_stalls,
            forgotten_checks=self.forgotten_checks, delayed_responses=self.delayed_responses,
            alerts=self.sensor.alerts if self.sensor else 0,
            supplies=dict(self.supplies),
            rest_minutes={w.id: w.rest_seconds / 60.0 for w in self.workers},
            samples=self.samples, events=self.kernel.events_fired,
            trace=self.trace.dumps() if self.trace is not None else None,
        )


def run_hifi(cfg: ScenarioConfig, seed: int | None = None, key_params: KeyParams | None = None,
             trace: bool = False) -> HifiResult:
    return HifiModel(cfg, seed, key_params, trace).run()
