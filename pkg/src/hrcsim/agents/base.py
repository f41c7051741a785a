"""Shared pieces for the detailed agents: straight-line bodies and an action runner."""
from __future__ import annotations

import math
from typing import Callable, Generator

from ..environment import Point, distance
from ..human import DEMANDS, FatigueState, can_start, recover_value, should_resume, time_to_recover
from ..kernel import Event, sample_triangular


class Body:
    """Piecewise-linear position: one active segment at a time."""

    def __init__(self, pos: Point):
        self._p0 = pos
        self._p1 = pos
        self._t0 = 0.0
        self._t1 = 0.0

    def position(self, t: float) -> Point:
        if t >= self._t1:
            return self._p1
        if t <= self._t0:
            return self._p0
        u = (t - self._t0) / (self._t1 - self._t0)
        return (self._p0[0] + u * (self._p1[0] - self._p0[0]),
                self._p0[1] + u * (self._p1[1] - self._p0[1]))

    def set_segment(self, p0: Point, p1: Point, t0: float, t1: float) -> None:
        self._p0, self._p1, self._t0, self._t1 = p0, p1, t0, t1

    def begin_move(self, now: float, dest: Point, speed: float) -> float:
        here = self.position(now)
        dur = distance(here, dest) / speed
        self.set_segment(here, dest, now, now + dur)
        return dur

    def halt(self, now: float) -> Point:
        p = self.position(now)
        self.set_segment(p, p, now, now)
        return p


# action tuples yielded by worker processes:
#   ("move", dest, speed, tag)      interruptible, position interpolated
#   ("hold", duration, on_done)     atomic, always completes
#   ("rest", duration)              interruptible, recovers fatigue
Action = tuple


class Worker(Body):
    """Worker with fatigue bookkeeping and a generator-driven action runner."""

    role = "worker"

    def __init__(self, model, agent_id: str, pos: Point):
        super().__init__(pos)
        self.m = model
        self.id = agent_id
        self.f = 1.0
        self._f_t = 0.0
        self._loaded = False
        self._tired_for: float | None = None
        self.rest_seconds = 0.0
        self._proc: Generator | None = None
        self._on_end: Callable | None = None
        self._ev: Event | None = None
        self._kind = ""
        self._pending_interrupt: Callable | None = None
        self.mode = "off"

    # fatigue ------------------------------------------------------------
    def sync_fatigue(self, now: float) -> float:
        if not self._loaded and now > self._f_t:
            self.f = recover_value(self.f, (now - self._f_t) / 60.0)
        self._f_t = max(self._f_t, now)
        return self.f

    def _finish_load(self, demand: float, dur: float) -> None:
        self.f = self.f * math.exp(-demand * dur / 60.0)
        self._f_t = self.m.kernel.now
        self._loaded = False

    def fatigue_gate(self, element: str):
        """Rest until the element may start; resting workers need the 10% margin."""
        demand = DEMANDS[element]
        k = self.m.kernel
        self.sync_fatigue(k.now)
        if self._tired_for is None and can_start(FatigueState(self.f), demand):
            return
        if self._tired_for is None:
            self._tired_for = demand
            self.m.emit(self.id, "rest", f=self.f, demand=demand)
        while not should_resume(FatigueState(self.f), self._tired_for):
            need = time_to_recover(self.f, self._tired_for + 0.10) * 60.0
            t0 = k.now
            try:
                yield ("rest", max(need, 1e-6))
            finally:
                self.rest_seconds += k.now - t0
            self.sync_fatigue(k.now)
        self.m.emit(self.id, "resume", f=self.f, demand=self._tired_for)
        self._tired_for = None

    def loaded(self, element: str, mean: float, effect: Callable | None = None):
        yield from self.fatigue_gate(element)
        demand = DEMANDS[element]
        dur = sample_triangular(mean, self.m.cfg.worker.spread, self.m.rng)
        self.sync_fatigue(self.m.kernel.now)
        self._loaded = True

        def done():
            self._finish_load(demand, dur)
            if effect is not None:
                effect()
        yield ("hold", dur, done)

    # action runner ------------------------------------------------------
    def run_process(self, gen: Generator, on_end: Callable | None = None) -> None:
        if self._proc is not None:
            raise RuntimeError(f"{self.id}: process already running")
        self._proc = gen
        self._on_end = on_end
        self._advance()

    def busy(self) -> bool:
        return self._proc is not None

    def _advance(self) -> None:
        k = self.m.kernel
        while True:
            try:
                act = next(self._proc)
            except StopIteration:
                self._proc = None
                cb, self._on_end = self._on_end, None
                if cb is not None:
                    cb()
                return
            kind = act[0]
            if kind == "move":
                _, dest, speed, tag = act
                here = self.position(k.now)
                if distance(here, dest) < 1e-9:
                    continue
                dur = self.begin_move(k.now, dest, speed)
                self.m.emit(self.id, "move", frm=list(here), to=list(dest), t1=round(k.now + dur, 6), tag=tag)
            elif kind == "hold":
                dur = act[1]
            elif kind == "rest":
                dur = act[1]
            else:
                raise RuntimeError(f"unknown action {kind}")
            self._kind = kind
            self._act = act
            self._ev = k.schedule(k.now + dur, self._complete)
            return

    def _complete(self) -> None:
        self._ev = None
        if self._kind == "hold" and self._act[2] is not None:
            self._act[2]()
        if self._pending_interrupt is not None:
            handler, self._pending_interrupt = self._pending_interrupt, None
            self._abort_proc()
            handler()
            return
        self._advance()

    def _abort_proc(self) -> None:
        if self._proc is not None:
            self._proc.close()
        self._proc = None
        self._on_end = None

    def interrupt(self, handler: Callable) -> None:
        """Stop the running process; atomic holds finish first, moves and rests stop now."""
        k = self.m.kernel
        if self._proc is None:
            handler()
            return
        if self._kind == "hold" and self._ev is not None:
            self._pending_interrupt = handler
            return
        if self._ev is not None:
            self._ev.cancel()
            self._ev = None
        if self._kind == "move":
            p = self.halt(k.now)
            self.m.emit(self.id, "halt", at=list(p))
        self._abort_proc()
        handler()
