"""Bricklaying robot and the three-worker team that moves and installs it."""
from __future__ import annotations

from ..environment import bricks_per_layer, brick_position, distance, laying_direction
from ..kernel import SimulationError, sample_triangular
from .base import Body


class Robot(Body):
    def __init__(self, model):
        m = model
        super().__init__(m.cfg.layout.robot_store.center)
        self.m = m
        cfg = m.cfg
        self.id = "robot"
        self.walls = cfg.layout.walls
        self.nper = [bricks_per_layer(w, cfg.brick) for w in self.walls]
        self.capacity = cfg.robot.capacity
        self.lay = cfg.robot.lay_duration
        self.speed = cfg.robot.move_velocity
        self.thr = cfg.brick.safety_distance
        self.wall_i = 0
        self.layer = 0
        self.idx = 0                # next brick of the layer, in laying order
        self.layer_laid = False     # every brick of the current layer is down
        self.bricks = 0
        self.remaining = m.total_bricks
        self.phase = "robotIdle"
        self.working = False
        self.broken = False
        self.laying = False
        self.done = False
        self.breakdowns = 0
        self.proximity_stalls = 0
        self._ev = None
        # slot positions per wall for layers 0 and 1; the pattern repeats every two layers
        self._slots = [(tuple(brick_position(w, 0, i, cfg.brick) for i in range(n)),
                        tuple(brick_position(w, 1, i, cfg.brick) for i in range(n)) if w.num_layers > 1 else ())
                       for w, n in zip(self.walls, self.nper)]

    # geometry -----------------------------------------------------------
    def brick_pos(self, wall_i: int, layer: int, idx: int):
        return self._slots[wall_i][layer & 1][idx]

    def work_target(self):
        i = min(self.idx, self.nper[self.wall_i] - 1)
        return self.brick_pos(self.wall_i, self.layer, i)

    def direction(self):
        return laying_direction(self.walls[self.wall_i], self.layer)

    def heading(self):
        """Direction of the robot's next laying pass (flips once a layer is down)."""
        w = self.walls[self.wall_i]
        if self.layer_laid and self.layer + 1 < w.num_layers:
            return laying_direction(w, self.layer + 1)
        return laying_direction(w, self.layer)

    def service_point(self, now: float):
        """Standoff spot behind the robot, just outside the safety circle."""
        x, y = self.position(now)
        dx, dy = self.heading()
        off = self.thr + 0.5
        return (x - dx * off, y - dy * off)

    def needs_supply(self) -> bool:
        return self.bricks < self.m.strategy_sl and not self.done

    def _set_phase(self, phase: str) -> None:
        if phase != self.phase:
            self.phase = phase
            if self.m.trace is not None:
                self.m.emit(self.id, "phase", to=phase)

    # lifecycle ----------------------------------------------------------
    def begin_work(self) -> None:
        self.working = True
        self._set_phase("robotWorking")
        self.m.emit(self.id, "work_start", bricks=self.bricks)
        if self.m.sensor is not None:
            self.m.sensor.robot_started(self.bricks)
        if self.broken:
            self.m.kernel.send(self.id, [self.m.emr.id], "out_of_bricks", self.bricks)
        else:
            self._proceed()

    def stop_work(self) -> None:
        k = self.m.kernel
        self.working = False
        if self._ev is not None:
            self._ev.cancel()
            self._ev = None
            self.halt(k.now)
        if self.m.sensor is not None:
            self.m.sensor.robot_stopped(self.bricks)

    def _proceed(self) -> None:
        if not self.working or self.done or self.laying or self._ev is not None:
            return
        if self.layer_laid:
            if self.m.emr.layer_finished(self.wall_i, self.layer):
                self._next_layer()
            else:
                self._set_phase("waitForPlaster")
            return
        if self.bricks == 0:
            self._break_down()
            return
        k = self.m.kernel
        tgt = self.work_target()
        here = self.position(k.now)
        if here[0] != tgt[0] or here[1] != tgt[1]:
            self._set_phase("moveToTargetBrick")
            dur = self.begin_move(k.now, tgt, self.speed)
            self._ev = k.schedule(k.now + dur, self._attempt)
        else:
            self._attempt()

    def _blocked(self, now: float) -> bool:
        x, y = self.position(now)
        lim = self.thr - 1e-9
        for w in self.m.workers:
            wx, wy = w.position(now)
            if (wx - x) ** 2 + (wy - y) ** 2 < lim * lim:
                return True
        return False

    def _attempt(self) -> None:
        self._ev = None
        k = self.m.kernel
        if not self.working:
            return
        if self.bricks == 0:
            self._break_down()
            return
        if self._blocked(k.now):
            self.proximity_stalls += 1
            self._set_phase("moveToTargetBrick")
            self._ev = k.schedule(k.now + 1.0, self._attempt)
            return
        self.bricks -= 1
        self.laying = True
        self._set_phase("bricklaying")
        if self.m.trace is not None:
            self.m.emit(self.id, "lay", wall=self.wall_i, layer=self.layer, brick=self.idx,
                        at=list(self.position(k.now)), bricks=self.bricks)
        self.m.emr.on_robot_progress()
        if self.m.sensor is not None:
            self.m.sensor.on_bricks(self.bricks)
        k.schedule(k.now + self.lay, self._lay_end)

    def _lay_end(self) -> None:
        self.laying = False
        self.remaining -= 1
        self.m.laid += 1
        if self.remaining == 0:
            self.done = True
            self._set_phase("robotIdle")
            self.m.finish()
            return
        self.idx += 1
        if self.idx == self.nper[self.wall_i]:
            self.layer_laid = True
            self.m.emr.on_robot_progress()
        self._proceed()

    def _next_layer(self) -> None:
        self.layer_laid = False
        self.idx = 0
        self.layer += 1
        if self.layer == self.walls[self.wall_i].num_layers:
            self.wall_i += 1
            self.layer = 0
            self.m.emit(self.id, "wall_done", next_wall=self.wall_i)
            self.m.emr.new_wall()
            self._set_phase("callingForCollaborator")
            self.m.team.call("relocate")
            return
        self._proceed()

    def _break_down(self) -> None:
        if self.broken:
            return
        self.broken = True
        # the robot starts empty; waiting for the first load is not a run-out
        initial = self.m.laid == 0 and not self.laying
        if not initial:
            self.breakdowns += 1
        self._set_phase("breakDown")
        self.m.emit(self.id, "breakdown", initial=initial)
        self.m.kernel.send(self.id, [self.m.emr.id], "out_of_bricks", 0)

    def refill(self, n: int) -> None:
        if n < 0 or self.bricks + n > self.capacity:
            raise SimulationError(f"refill of {n} overflows robot holding {self.bricks}")
        self.bricks += n
        if self.m.sensor is not None:
            self.m.sensor.on_bricks(self.bricks)
        if self.broken and self.bricks > 0:
            self.broken = False
            self._set_phase("robotWorking")
            self._proceed()

    def receive(self, kind: str, data, sender: str) -> None:
        if kind == "layer_done":
            if self.layer_laid:
                self._proceed()
        elif kind == "start_work":
            self.m.team.call("morning")
        elif kind == "off_duty":
            self.stop_work()
            self.m.team.call("evening")
        else:
            raise SimulationError(f"robot: unexpected message {kind!r}")


class Team:
    """Moves the robot with its three workers: morning set-up, relocation, evening return."""

    def __init__(self, model):
        self.m = model
        self.purpose = None
        self._arrived: set[str] = set()
        self._ev = None
        self._stage = None

    def call(self, purpose: str) -> None:
        m = self.m
        r = m.robot
        if purpose == "evening":
            if self.purpose in ("morning", "relocate") and self._stage is not None:
                # abandon the set-up in progress; the robot stays where it is
                if self._ev is not None:
                    self._ev.cancel()
                    self._ev = None
                p = r.halt(m.kernel.now)
                for w in m.workers:
                    w.set_segment(p, p, m.kernel.now, m.kernel.now)
                m.emit("team", "halt", at=list(p))
                self._stage = None
                self.purpose = "evening"
                self._start_sequence()
                return
            if self.purpose in ("morning", "relocate"):
                self.purpose = "evening"
                return
        self.purpose = purpose
        self._arrived.clear()
        self._stage = None
        meet = r.position(m.kernel.now)
        for w in m.workers:
            w.summon(meet, purpose, self._arrive)

    def _arrive(self, w) -> None:
        self._arrived.add(w.id)
        if len(self._arrived) == len(self.m.workers):
            self._start_sequence()

    def _schedule(self, dur: float, fn) -> None:
        k = self.m.kernel
        self._ev = k.schedule(k.now + dur, fn)

    def _start_sequence(self) -> None:
        m = self.m
        r = m.robot
        if self.purpose == "evening" and distance(r.position(m.kernel.now), m.cfg.layout.robot_store.center) < 1e-9:
            self._rest()
            return
        r._set_phase("preparingToMoveToWorkSite" if self.purpose != "evening" else "returning")
        self._stage = "prep"
        m.emit("team", "prep", purpose=self.purpose)
        self._schedule(sample_triangular(m.cfg.worker.preparation_duration, m.cfg.worker.spread, m.rng),
                       self._co_move)

    def _co_move(self) -> None:
        m = self.m
        k = m.kernel
        r = m.robot
        dest = m.cfg.layout.robot_store.center if self.purpose == "evening" else r.work_target()
        self._stage = "move"
        if self.purpose != "evening":
            r._set_phase("movingToWorkSite")
        here = r.position(k.now)
        dur = r.begin_move(k.now, dest, m.cfg.worker.move_robot_velocity)
        for w in m.workers:
            w.set_segment(here, dest, k.now, k.now + dur)
        m.emit("team", "co_move", frm=list(here), to=list(dest), t1=round(k.now + dur, 6),
               tag="return" if self.purpose == "evening" else "work")
        self._schedule(dur, self._arrived_at_dest)

    def _arrived_at_dest(self) -> None:
        m = self.m
        if self.purpose == "evening":
            self._rest()
            return
        m.robot._set_phase("robotSetting")
        self._stage = "install"
        self._schedule(sample_triangular(m.cfg.worker.installation_duration, m.cfg.worker.spread, m.rng),
                       self._installed)

    def _installed(self) -> None:
        m = self.m
        self._ev = None
        self._stage = None
        self.purpose = None
        m.robot._set_phase("callingForCollaborator")
        m.emit("team", "installed")
        for w in m.workers:
            w.start_duty()
        m.robot.begin_work()

    def _rest(self) -> None:
        m = self.m
        self._ev = None
        self._stage = None
        self.purpose = None
        m.robot._set_phase("robotIdle")
        for w in m.workers:
            w.go_rest()
