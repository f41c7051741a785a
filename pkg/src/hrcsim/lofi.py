"""Position-free service model of N robots and M brick-supplement workers.

Used only to estimate the coupling parameters (GCI, OR, WT) of multi-robot
scenarios.  Walking, fatigue and forgetting are ignored; every task takes its
mean duration.

Semantics, which the hand-checked schedules in the tests follow exactly:

* a running robot holding ``b`` bricks at time ``t0`` holds
  ``b - floor((t - t0) / consume_interval)`` at ``t`` and halts when that hits 0;
* worker ``w`` makes its first check at ``worker_offsets[w]`` and afterwards
  idles ``ci`` after finishing each check or supplement;
* worker ``w`` checks robots round-robin starting at robot ``w mod n``;
* a check lasts ``t_check``; if the robot then holds fewer than ``sl`` bricks
  and nobody is serving it, the same worker supplements it at once;
* a request from a robot that is being checked succeeds and is answered by
  the checking worker when the check ends;
* a supplement lasts ``t_supply_temp`` when the temp stock exceeds capacity,
  else ``t_supply_long`` (the temp stock then gains 5 * capacity); it ends by
  refilling the robot to capacity and debiting the temp stock;
* a halted robot (or, with sensors, a robot dropping below ``sl``) requests
  service: the request succeeds when some worker is idle (lowest index serves
  it now) and fails otherwise; failed requests queue FIFO and are served by
  the first worker to finish its task, or by a check that reaches the robot;
  the wait from request to supplement start is a WT sample;
* a GCI sample is the start of a check minus the checked robot's latest
  check or supplement end; a robot's first check yields no sample.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

from .kernel import Kernel, RandomStream


class EstimationError(RuntimeError):
    """Raised when a log holds too little data for an estimate."""


@dataclass(frozen=True)
class LofiConfig:
    n_robots: int
    n_bs_workers: int
    t_check: float
    t_supply_temp: float
    t_supply_long: float
    consume_interval: float
    capacity: int
    sl: int
    ci: float
    sensors: bool = False
    horizon: float = 20 * 8 * 3600.0
    seed: int = 0
    initial_bricks: tuple[int, ...] | None = None
    initial_temp: int = 0
    worker_offsets: tuple[float, ...] | None = None

    def __post_init__(self):
        for name in ("t_check", "t_supply_temp", "t_supply_long", "consume_interval", "ci", "horizon"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.n_robots < 1 or self.n_bs_workers < 1:
            raise ValueError("need at least one robot and one worker")
        if not 0 < self.sl <= self.capacity:
            raise ValueError("sl must satisfy 0 < sl <= capacity")
        if self.initial_bricks is not None and len(self.initial_bricks) != self.n_robots:
            raise ValueError("initial_bricks needs one entry per robot")
        if self.worker_offsets is not None and len(self.worker_offsets) != self.n_bs_workers:
            raise ValueError("worker_offsets needs one entry per worker")


@dataclass
class RequestLog:
    num_success: int = 0
    num_failed: int = 0
    failed_wait_intervals: list[float] = field(default_factory=list)
    gci_samples: list[float] = field(default_factory=list)
    check_supplies: int = 0
    request_supplies: int = 0
    checks: int = 0
    events: list[tuple] = field(default_factory=list)


def occupied_rate(log: RequestLog) -> float:
    total = log.num_success + log.num_failed
    return log.num_failed / total if total else 0.0


def waiting_time(log: RequestLog) -> float:
    w = log.failed_wait_intervals
    return sum(w) / len(w) if w else 0.0


def get_checked_interval(log: RequestLog) -> float:
    if not log.gci_samples:
        raise EstimationError("no check reached a robot within the horizon; GCI undefined")
    return sum(log.gci_samples) / len(log.gci_samples)


class _Robot:
    __slots__ = ("i", "b0", "t0", "running", "halt_ev", "alert_ev", "last_end", "served", "queued_at",
                 "checked_by", "requested")

    def __init__(self, i, bricks):
        self.i = i
        self.b0 = bricks
        self.t0 = 0.0
        self.running = bricks > 0
        self.halt_ev = None
        self.alert_ev = None
        self.last_end = None
        self.served = False
        self.queued_at = None
        self.checked_by = None
        self.requested = False


class LofiModel:
    def __init__(self, cfg: LofiConfig, record: bool = False):
        self.cfg = cfg
        self.k = Kernel()
        self.rng = RandomStream(cfg.seed)
        self.log = RequestLog()
        self.record = record
        init = cfg.initial_bricks or (0,) * cfg.n_robots
        self.robots = [_Robot(i, b) for i, b in enumerate(init)]
        self.temp = cfg.initial_temp
        n = cfg.n_bs_workers
        self.idle = [True] * n
        self.timer = [None] * n
        self.pointer = [w % cfg.n_robots for w in range(n)]
        self.queue: deque[_Robot] = deque()

    def _note(self, *ev) -> None:
        if self.record:
            self.log.events.append((round(self.k.now, 9),) + ev)

    # robot bookkeeping ----------------------------------------------------
    def bricks(self, r: _Robot) -> int:
        if not r.running:
            return r.b0
        used = math.floor((self.k.now - r.t0) / self.cfg.consume_interval + 1e-9)
        return max(0, r.b0 - used)

    def _arm_robot(self, r: _Robot) -> None:
        c = self.cfg
        k = self.k
        r.t0 = k.now
        r.running = r.b0 > 0
        if r.halt_ev is not None:
            r.halt_ev.cancel()
        if r.alert_ev is not None:
            r.alert_ev.cancel()
            r.alert_ev = None
        r.halt_ev = k.schedule(k.now + r.b0 * c.consume_interval, self._halt, r) if r.running else None
        if c.sensors and r.b0 >= c.sl:
            r.alert_ev = k.schedule(k.now + (r.b0 - c.sl + 1) * c.consume_interval, self._alert, r)

    def _halt(self, r: _Robot) -> None:
        r.halt_ev = None
        r.b0 = 0
        r.running = False
        self._note("halt", r.i)
        self._request(r, "halt")

    def _alert(self, r: _Robot) -> None:
        r.alert_ev = None
        self._note("alert", r.i)
        self._request(r, "alert")

    def _request(self, r: _Robot, why: str) -> None:
        if r.served or r.queued_at is not None or r.requested:
            return
        if r.checked_by is not None:
            # the worker inspecting this robot answers at the end of the check
            self.log.num_success += 1
            r.requested = True
            self._note("request_ok", r.i, r.checked_by)
            return
        for w, free in enumerate(self.idle):
            if free:
                self.log.num_success += 1
                self._note("request_ok", r.i, w)
                self._start_supply(w, r, check=False)
                return
        self.log.num_failed += 1
        r.queued_at = self.k.now
        self.queue.append(r)
        self._note("request_failed", r.i)

    # workers ---------------------------------------------------------------
    def _go_idle(self, w: int) -> None:
        k = self.k
        self.idle[w] = True
        while self.queue:
            r = self.queue.popleft()
            if r.queued_at is not None and not r.served:
                self._start_supply(w, r, check=False)
                return
        self.timer[w] = k.schedule(k.now + self.cfg.ci, self._check, w)

    def _leave_idle(self, w: int) -> None:
        self.idle[w] = False
        if self.timer[w] is not None:
            self.timer[w].cancel()
            self.timer[w] = None

    def _check(self, w: int) -> None:
        k = self.k
        self.timer[w] = None
        self._leave_idle(w)
        r = self.robots[self.pointer[w]]
        self.pointer[w] = (self.pointer[w] + 1) % self.cfg.n_robots
        self.log.checks += 1
        if r.last_end is not None:
            self.log.gci_samples.append(k.now - r.last_end)
        r.checked_by = w
        self._note("check", w, r.i)
        k.schedule(k.now + self.cfg.t_check, self._check_end, w, r)

    def _check_end(self, w: int, r: _Robot) -> None:
        r.last_end = self.k.now
        if r.checked_by == w:
            r.checked_by = None
        if not r.served and self.bricks(r) < self.cfg.sl:
            self._start_supply(w, r, check=not r.requested)
        else:
            self._go_idle(w)

    def _start_supply(self, w: int, r: _Robot, check: bool) -> None:
        c = self.cfg
        k = self.k
        self._leave_idle(w)
        r.served = True
        r.requested = False
        if r.queued_at is not None:
            self.log.failed_wait_intervals.append(k.now - r.queued_at)
            r.queued_at = None
        if check:
            self.log.check_supplies += 1
        else:
            self.log.request_supplies += 1
        if self.temp > c.capacity:
            dur = c.t_supply_temp
            path = "temp"
        else:
            dur = c.t_supply_long
            path = "long"
            self.temp += 5 * c.capacity
        self._note("supply", w, r.i, path)
        k.schedule(k.now + dur, self._supply_end, w, r)

    def _supply_end(self, w: int, r: _Robot) -> None:
        c = self.cfg
        left = self.bricks(r)
        self.temp = max(0, self.temp - (c.capacity - left))
        r.b0 = c.capacity
        r.served = False
        r.last_end = self.k.now
        self._arm_robot(r)
        self._note("refill", w, r.i)
        self._go_idle(w)

    def run(self) -> RequestLog:
        c = self.cfg
        k = self.k
        offsets = c.worker_offsets
        if offsets is None:
            offsets = tuple(self.rng.uniform(0.0, c.ci) for _ in range(c.n_bs_workers))
        for w, off in enumerate(offsets):
            self.timer[w] = k.schedule(off, self._check, w)
        for r in self.robots:
            self._arm_robot(r)
            if not r.running:
                k.schedule(0.0, self._halt, r)
            elif c.sensors and r.b0 < c.sl:
                r.alert_ev = k.schedule(0.0, self._alert, r)
        k.run(until=c.horizon)
        return self.log


def run_lofi(cfg: LofiConfig, record: bool = False) -> RequestLog:
    return LofiModel(cfg, record).run()
