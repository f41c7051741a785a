"""Gravity sensor inside the robot: alerts the brick-supplement worker once per shortage."""
from __future__ import annotations

from dataclasses import dataclass, replace

from ..kernel import SimulationError


@dataclass(frozen=True)
class SensorState:
    phase: str = "closed"       # closed | checking | alerting
    armed: bool = True          # cleared by an alert, set again once bricks >= sl


def sensor_step(state: SensorState, event: str, bricks: int, sl: int) -> tuple[SensorState, list[str]]:
    """Events: robot_start, robot_stop, bricks, alert_end. Returns the alert messages to emit."""
    if event == "robot_stop":
        return SensorState("closed", state.armed or bricks >= sl), []
    if event == "alert_end":
        if state.phase != "alerting":
            return state, []
        return replace(state, phase="checking", armed=state.armed or bricks >= sl), []
    if event not in ("robot_start", "bricks"):
        raise SimulationError(f"sensor: unknown event {event!r}")
    if event == "robot_start":
        state = replace(state, phase="checking")
    elif state.phase == "closed":
        return replace(state, armed=state.armed or bricks >= sl), []
    if bricks >= sl:
        return replace(state, armed=True), []
    if state.armed and state.phase == "checking":
        return SensorState("alerting", False), ["alert"]
    return state, []


class Sensor:
    def __init__(self, model, bs_ids: list[str]):
        self.m = model
        self.id = "sensor"
        self.state = SensorState()
        self._bs = list(bs_ids)
        self._end_ev = None
        self.alerts = 0

    def _apply(self, event: str, bricks: int) -> None:
        sl = self.m.strategy_sl
        prev = self.state
        self.state, msgs = sensor_step(self.state, event, bricks, sl)
        if prev.phase != self.state.phase:
            self.m.emit(self.id, "phase", frm=prev.phase, to=self.state.phase, bricks=bricks)
        if self._end_ev is not None and self.state.phase != "alerting":
            self._end_ev.cancel()
            self._end_ev = None
        for msg in msgs:
            self.alerts += 1
            k = self.m.kernel
            self._end_ev = k.schedule(k.now + self.m.cfg.alert_duration, self._alert_end)
            k.send(self.id, self._bs, msg, bricks)

    def _alert_end(self) -> None:
        self._end_ev = None
        self._apply("alert_end", self.m.robot.bricks)

    def robot_started(self, bricks: int) -> None:
        self._apply("robot_start", bricks)

    def robot_stopped(self, bricks: int) -> None:
        self._apply("robot_stop", bricks)

    def on_bricks(self, bricks: int) -> None:
        st = self.state
        # nothing changes while armed above the limit or disarmed below it
        if st.phase == "checking" and (bricks >= self.m.strategy_sl) == st.armed:
            return
        self._apply("bricks", bricks)
