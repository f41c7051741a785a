"""Deterministic event kernel shared by both fidelity levels.

A run owns one :class:`Kernel` and one :class:`RandomStream`.  Events at equal
times fire in scheduling order; zero-latency messages are drained before the
next timed event is popped.
"""
from __future__ import annotations

import heapq
import json
import random
from collections import deque
from typing import Any, Callable, Iterable


class SimulationError(RuntimeError):
    """Raised for kernel misuse and state-machine bugs."""


class RandomStream(random.Random):
    """Seeded stream; equal seeds give identical sequences."""

    def __init__(self, seed: int = 0):
        self.seed_value = int(seed)
        super().__init__(self.seed_value)


def sample_triangular(mean: float, spread_fraction: float, rng: random.Random) -> float:
    """Draw from the symmetric triangular law on mean*(1 -/+ f) with mode at mean."""
    if spread_fraction == 0.0:
        return mean
    return rng.triangular(mean * (1.0 - spread_fraction), mean * (1.0 + spread_fraction), mean)


class Event:
    __slots__ = ("fire_time", "seq", "target", "payload", "callback", "args", "cancelled")

    def __init__(self, fire_time, seq, target, payload, callback, args):
        self.fire_time = fire_time
        self.seq = seq
        self.target = target
        self.payload = payload
        self.callback = callback
        self.args = args
        self.cancelled = False

    def cancel(self) -> None:
        self.cancelled = True


class TraceWriter:
    """Collects (time, agent, kind, from, to, data) records."""

    def __init__(self):
        self.records: list[dict] = []

    def emit(self, time: float, agent: str, kind: str, **data: Any) -> None:
        rec = {"t": round(time, 6), "agent": agent, "kind": kind}
        rec.update(data)
        self.records.append(rec)

    def dumps(self) -> str:
        return "".join(json.dumps(r, sort_keys=True) + "\n" for r in self.records)


class Kernel:
    """Virtual clock, timed event heap and an immediate message queue."""

    def __init__(self, trace: TraceWriter | None = None):
        self.now = 0.0
        self._heap: list[tuple[float, int, Event]] = []
        self._seq = 0
        self._immediate: deque = deque()
        self._agents: dict[str, Any] = {}
        self._stopped = False
        self.trace = trace
        self.events_fired = 0

    # registry -----------------------------------------------------------
    def register(self, agent_id: str, agent: Any) -> None:
        if agent_id in self._agents:
            raise SimulationError(f"duplicate agent id {agent_id!r}")
        self._agents[agent_id] = agent

    def agent(self, agent_id: str) -> Any:
        try:
            return self._agents[agent_id]
        except KeyError:
            raise SimulationError(f"unknown agent {agent_id!r}") from None

    # scheduling ---------------------------------------------------------
    def schedule(self, fire_time: float, callback: Callable, *args,
                 target: str = "", payload: Any = None) -> Event:
        if fire_time < self.now:
            raise SimulationError(
                f"event for {target or callback!r} scheduled in the past "
                f"({fire_time} < {self.now})")
        self._seq += 1
        ev = Event(fire_time, self._seq, target, payload, callback, args)
        heapq.heappush(self._heap, (fire_time, self._seq, ev))
        return ev

    def after(self, delay: float, callback: Callable, *args) -> Event:
        return self.schedule(self.now + delay, callback, *args)

    def send(self, sender: str, recipients: Iterable[str], kind: str, data: Any = None) -> None:
        """Zero-latency delivery: every recipient gets the message this instant."""
        for rid in recipients:
            agent = self.agent(rid)
            self._immediate.append((agent, kind, data, sender))

    def stop(self) -> None:
        self._stopped = True

    @property
    def stopped(self) -> bool:
        return self._stopped

    def _drain(self) -> None:
        imm = self._immediate
        while imm:
            agent, kind, data, sender = imm.popleft()
            agent.receive(kind, data, sender)

    def run(self, until: float = float("inf")) -> float:
        heap = self._heap
        pop = heapq.heappop
        self._drain()
        while heap and not self._stopped:
            if heap[0][0] > until:
                break
            t, _, ev = pop(heap)
            if ev.cancelled:
                continue
            self.now = t
            self.events_fired += 1
            ev.callback(*ev.args)
            if self._immediate:
                self._drain()
        if not self._stopped and until != float("inf") and until > self.now:
            self.now = until
        return self.now
