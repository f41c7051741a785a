"""Worker roles: extra-mortar removing (EMR), brick supplement (BS) and the spare team member."""
from __future__ import annotations

import math

from ..environment import distance
from ..human import DEMANDS, recover_value, remember_probability
from ..kernel import SimulationError, sample_triangular
from .base import Worker


class TeamWorker(Worker):
    def walk_speed(self) -> float:
        return self.m.cfg.worker.walk_velocity

    def summon(self, meet, purpose: str, cb) -> None:
        self.before_summon()
        self.mode = "rmi"
        tag = "return" if purpose == "evening" else "rmi"

        def go():
            self.run_process(self._walk(meet, tag), lambda: cb(self))
        self.interrupt(go)

    def _walk(self, dest, tag: str):
        yield ("move", dest, self.walk_speed(), tag)

    def before_summon(self) -> None:
        pass

    def go_rest(self) -> None:
        self.mode = "off"
        self.m.kernel.send(self.id, [self.m.wh.id], "worker_off")

    def start_duty(self) -> None:
        raise NotImplementedError

    def receive(self, kind: str, data, sender: str) -> None:
        if kind in ("start_work", "off_duty"):
            return
        raise SimulationError(f"{self.id}: unexpected message {kind!r}")


class OtherWorker(TeamWorker):
    role = "other"

    def start_duty(self) -> None:
        self.mode = "duty"
        self.run_process(self._walk(self._idle_spot(), "work"))

    def _idle_spot(self):
        m = self.m
        z = m.cfg.layout.work_zone
        margin = m.cfg.brick.safety_distance + 1.0
        rp = m.robot.position(m.kernel.now)
        for _ in range(200):
            p = (m.rng.uniform(z.x0, z.x1), m.rng.uniform(z.y0, z.y1))
            if m.cfg.layout.clear_of_walls(p, margin) and distance(p, rp) >= margin:
                return p
        return m.cfg.layout.robot_store.center


class EMRWorker(TeamWorker):
    role = "EMR"

    def __init__(self, model, agent_id, pos):
        super().__init__(model, agent_id, pos)
        self.wall_i = 0
        self.layer = 0
        self.j = 0
        self._brick_ev = None
        self._brick_interrupt = None
        self._demand = DEMANDS["extra-mortar-removing"]
        self.bricks_done = 0

    def layer_finished(self, wall_i: int, layer: int) -> bool:
        return (wall_i, layer) < (self.wall_i, self.layer)

    def new_wall(self) -> None:
        r = self.m.robot
        self.wall_i, self.layer, self.j = r.wall_i, 0, 0

    def _post(self):
        r = self.m.robot
        x, y = r.work_target()
        dx, dy = r.heading()
        off = r.thr + 0.5
        return (x - dx * off, y - dy * off)

    def start_duty(self) -> None:
        self.mode = "duty"
        self.run_process(self._walk(self._post(), "work"), self._try)

    def on_robot_progress(self) -> None:
        if self.mode == "duty" and self._proc is None and self._brick_ev is None:
            self._try()

    def receive(self, kind: str, data, sender: str) -> None:
        if kind == "out_of_bricks":
            self.m.kernel.send(self.id, self.m.bs_ids, "request", data)
        else:
            super().receive(kind, data, sender)

    def _try(self) -> None:
        m = self.m
        r = m.robot
        if self.mode != "duty" or self._proc is not None or self._brick_ev is not None:
            return
        if (r.wall_i, r.layer) != (self.wall_i, self.layer):
            return
        j = self.j
        if not (r.layer_laid or r.idx >= j + 10):
            return
        k = m.kernel
        now = k.now
        if now > self._f_t:
            self.f = recover_value(self.f, (now - self._f_t) / 60.0)
            self._f_t = now
        # inline can_start: this runs once per brick
        if self._tired_for is not None or self.f < self._demand:
            self.run_process(self.fatigue_gate("extra-mortar-removing"), self._try)
            return
        tgt = r.brick_pos(self.wall_i, self.layer, j)
        here = self.position(now)
        walk = math.hypot(tgt[0] - here[0], tgt[1] - here[1]) / m.cfg.worker.walk_velocity
        self.set_segment(here, tgt, k.now, k.now + walk)
        if m.trace is not None:
            m.emit(self.id, "move", frm=list(here), to=list(tgt), t1=round(k.now + walk, 6), tag="work")
        mortar = sample_triangular(m.cfg.worker.mortar_duration, m.cfg.worker.spread, m.rng)
        self._brick_ev = k.schedule(k.now + walk + mortar, self._brick_done, k.now + walk, mortar)

    def _brick_done(self, t_load: float, mortar: float) -> None:
        m = self.m
        k = m.kernel
        self._brick_ev = None
        if t_load > self._f_t:
            self.f = recover_value(self.f, (t_load - self._f_t) / 60.0)
        self.f *= math.exp(-self._demand * mortar / 60.0)
        self._f_t = k.now
        self.bricks_done += 1
        self.j += 1
        r = m.robot
        post = None
        if self.j == r.nper[self.wall_i]:
            m.emit(self.id, "layer_done", wall=self.wall_i, layer=self.layer)
            x, y = self.position(k.now)
            dx, dy = r.direction()
            off = r.thr + 0.5
            post = (x + dx * off, y + dy * off)
            self.layer += 1
            self.j = 0
            k.send(self.id, [r.id], "layer_done", (self.wall_i, self.layer - 1))
        if self._brick_interrupt is not None:
            h, self._brick_interrupt = self._brick_interrupt, None
            h()
            return
        if post is not None:
            self.run_process(self._walk(post, "work"), self._try)
        else:
            self._try()

    def interrupt(self, handler) -> None:
        if self._brick_ev is not None:
            self._brick_interrupt = handler
            return
        super().interrupt(handler)


class BSWorker(TeamWorker):
    role = "BS"

    def __init__(self, model, agent_id, pos):
        super().__init__(model, agent_id, pos)
        lay = model.cfg.layout
        self.home = lay.temp_store.center
        self.lt_point = lay.long_term_store.center
        self.carried = 0
        self.pending: set[str] = set()
        self._check_ev = None
        self._delay_ev = None
        kp = model.key_params
        self.gci = kp.gci
        self.occ = kp.occupied_rate
        self.wt = kp.wt
        self.rp = remember_probability(self.gci / model.cfg.forgetting_unit, model.cfg.forgetting)

    def walk_speed(self) -> float:
        w = self.m.cfg.worker
        return w.carry_velocity if self.carried else w.walk_velocity

    # duty cycle ---------------------------------------------------------
    def start_duty(self) -> None:
        self.mode = "returning"
        self.run_process(self._go_home(), self._enter_idle)

    def before_summon(self) -> None:
        if self.mode == "supplying":
            # finish the job once back on duty
            self.pending.add("interrupted")
        self._cancel_timers()

    def _cancel_timers(self) -> None:
        for name in ("_check_ev", "_delay_ev"):
            ev = getattr(self, name)
            if ev is not None:
                ev.cancel()
                setattr(self, name, None)

    def _go_home(self):
        yield ("move", self.home, self.walk_speed(), "work")
        if self.carried:
            self.m.temp_stock += self.carried
            self.m.emit(self.id, "deposit", n=self.carried, temp=self.m.temp_stock)
            self.carried = 0

    def _enter_idle(self) -> None:
        m = self.m
        self.mode = "checkIdle"
        if self.pending:
            self.pending.clear()
            if m.robot.needs_supply() and m.robot.working:
                self._respond("pending")
                return
        k = m.kernel
        if self.gci != math.inf:
            self._check_ev = k.schedule(k.now + self.gci, self._on_check)

    def _on_check(self) -> None:
        m = self.m
        k = m.kernel
        self._check_ev = None
        if self.rp < 1.0 and m.rng.random() >= self.rp:
            m.forgotten_checks += 1
            m.emit(self.id, "forget")
            if self.gci != math.inf:
                self._check_ev = k.schedule(k.now + self.gci, self._on_check)
            return
        if self._delay_ev is not None:
            self._delay_ev.cancel()
            self._delay_ev = None
        self.mode = "checking"
        self.run_process(self._check_proc(), self._enter_idle)

    def _check_proc(self):
        m = self.m
        k = m.kernel
        t0 = k.now
        m.emit(self.id, "check_start")
        yield from self._goto_robot()
        yield ("hold", m.cfg.worker.check_duration, None)
        m.samples["t_check"].append(k.now - t0)
        m.emit(self.id, "check_end", bricks=m.robot.bricks)
        if m.robot.needs_supply():
            m.supplies["check"] += 1
            self.mode = "supplying"
            yield from self._supply("check")
        self.mode = "returning"
        yield from self._go_home()

    def _respond(self, source: str) -> None:
        self._cancel_timers()
        self.mode = "supplying"
        self.m.supplies[source] += 1
        self.run_process(self._supply_proc(source), self._enter_idle)

    def _supply_proc(self, source: str):
        yield from self._supply(source)
        self.mode = "returning"
        yield from self._go_home()

    def _on_delay_end(self) -> None:
        self._delay_ev = None
        if self.m.robot.needs_supply() and self.m.robot.working:
            self._respond("delayed")

    def receive(self, kind: str, data, sender: str) -> None:
        m = self.m
        if kind in ("request", "alert"):
            m.emit(self.id, "notified", what=kind, mode=self.mode)
            if self.mode == "checkIdle":
                if self._delay_ev is not None:
                    return
                if self.occ > 0.0 and m.rng.random() < self.occ:
                    k = m.kernel
                    m.delayed_responses += 1
                    self._delay_ev = k.schedule(k.now + self.wt, self._on_delay_end)
                    m.emit(self.id, "delayed", until=round(k.now + self.wt, 6))
                else:
                    self._respond(kind)
            elif self.mode in ("checking", "supplying", "returning"):
                self.pending.add(kind)
            else:
                # off duty or moving the robot: handled once back on duty
                self.pending.add(kind)
        elif kind == "off_duty":
            self._cancel_timers()
        else:
            super().receive(kind, data, sender)

    # movement and brick handling -------------------------------------------
    def _goto_robot(self):
        r = self.m.robot
        k = self.m.kernel
        for _ in range(100):
            tgt = r.service_point(k.now)
            if distance(self.position(k.now), tgt) < 0.3:
                return
            yield ("move", tgt, self.walk_speed(), "work")

    def _take(self, source: str, n: int) -> None:
        m = self.m
        if source == "lt":
            m.lt_stock -= n
        else:
            m.temp_stock -= n
        self.carried += n
        m.emit(self.id, "grab", source=source, n=n, carried=self.carried)

    def _drop(self) -> None:
        m = self.m
        n = self.carried
        m.temp_stock += n
        self.carried = 0
        m.emit(self.id, "drop", n=n, temp=m.temp_stock)

    def _add(self) -> None:
        m = self.m
        r = m.robot
        n = min(self.carried, r.capacity - r.bricks)
        self.carried -= n
        m.emit(self.id, "add", n=n, robot=r.bricks + n)
        r.refill(n)

    def _supply(self, source: str):
        m = self.m
        k = m.kernel
        w = m.cfg.worker
        cap = m.robot.capacity
        t0 = k.now
        long_path = m.temp_stock + self.carried <= cap and m.lt_stock > 0
        m.emit(self.id, "supply_start", source=source, path="long" if long_path else "temp")
        if long_path:
            if self.carried:
                yield ("move", self.home, self.walk_speed(), "work")
                self._drop()
            yield ("move", self.lt_point, self.walk_speed(), "work")
            yield from self.loaded("grabbing", w.grab_duration,
                                   lambda: self._take("lt", min(5 * cap, m.lt_stock)))
            yield ("move", self.home, self.walk_speed(), "work")
            yield from self.loaded("dropping", w.drop_duration, self._drop)
        else:
            yield ("move", self.home, self.walk_speed(), "work")
            if self.carried:
                self._drop()
        if m.temp_stock == 0:
            return
        yield from self.loaded("grabbing", w.grab_duration,
                               lambda: self._take("temp", min(cap, m.temp_stock)))
        yield from self._goto_robot()
        yield from self.loaded("adding", w.supplement_duration, self._add)
        m.samples["t_supply_long" if long_path else "t_supply_temp"].append(k.now - t0)
