"""Daily working window: one eight-hour working interval per period."""
from __future__ import annotations

from ..kernel import SimulationError

# (phase, event) -> (next phase, broadcast)
_TABLE = {
    ("waitToStartWork", "day_start"): ("working", "start_work"),
    ("working", "day_end"): ("workingHourFinished", "off_duty"),
    ("workingHourFinished", "all_off"): ("resting", None),
    ("resting", "day_start"): ("working", "start_work"),
}


def working_hour_step(phase: str, event: str) -> tuple[str, list[str]]:
    try:
        nxt, msg = _TABLE[(phase, event)]
    except KeyError:
        raise SimulationError(f"working-hour: event {event!r} invalid in phase {phase!r}") from None
    return nxt, ([msg] if msg else [])


class WorkingHour:
    def __init__(self, model, worker_ids: list[str], robot_id: str):
        self.m = model
        self.id = "working_hour"
        self.phase = "waitToStartWork"
        self.day = 0
        self._workers = list(worker_ids)
        self._robot = robot_id
        self._off: set[str] = set()

    def start(self) -> None:
        self.m.kernel.schedule(0.0, self._day_start)

    def day_window(self, day: int) -> tuple[float, float]:
        t = self.m.cfg.time
        return day * t.period, day * t.period + t.day_length

    def _step(self, event: str) -> None:
        prev = self.phase
        self.phase, msgs = working_hour_step(self.phase, event)
        self.m.emit(self.id, "phase", frm=prev, to=self.phase, day=self.day)
        for msg in msgs:
            # workers first so they drop timers before the robot summons them
            self.m.kernel.send(self.id, self._workers + [self._robot], msg, self.day)

    def _day_start(self) -> None:
        k = self.m.kernel
        if self.day >= self.m.cfg.time.max_days:
            self.m.timeout()
            return
        self._off.clear()
        self._step("day_start")
        start, end = self.day_window(self.day)
        k.schedule(end, self._day_end)

    def _day_end(self) -> None:
        self._step("day_end")
        self.day += 1
        self.m.kernel.schedule(self.day * self.m.cfg.time.period, self._day_start)

    def receive(self, kind: str, data, sender: str) -> None:
        if kind != "worker_off":
            raise SimulationError(f"working-hour: unexpected message {kind!r}")
        self._off.add(sender)
        if self.phase == "workingHourFinished" and self._off >= set(self._workers):
            self._step("all_off")
