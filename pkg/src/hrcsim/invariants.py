"""Checks that replay a detailed-model trace and report rule violations.

Each checker takes the parsed trace records and returns a list of
human-readable violations; an empty list means the trace is clean.
"""
from __future__ import annotations

import json
import math

from .human import RESUME_MARGIN

# traces round times to 1e-6 s, so replayed positions carry a little noise
POS_TOL = 1e-5
F_TOL = 1e-9


def parse_trace(text: str) -> list[dict]:
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def _start(records: list[dict]) -> dict:
    for r in records:
        if r["kind"] == "start" and r["agent"] == "model":
            return r
    raise ValueError("trace has no model start record")


class _Track:
    __slots__ = ("p0", "p1", "t0", "t1")

    def __init__(self, p):
        self.p0 = self.p1 = tuple(p)
        self.t0 = self.t1 = 0.0

    def set(self, p0, p1, t0, t1):
        self.p0, self.p1, self.t0, self.t1 = tuple(p0), tuple(p1), t0, t1

    def at(self, t):
        if t >= self.t1 or self.t1 <= self.t0:
            return self.p1
        if t <= self.t0:
            return self.p0
        u = (t - self.t0) / (self.t1 - self.t0)
        return (self.p0[0] + u * (self.p1[0] - self.p0[0]),
                self.p0[1] + u * (self.p1[1] - self.p0[1]))


def check_safety(records: list[dict]) -> list[str]:
    """No worker is inside the safety distance of the robot when a brick is laid."""
    st = _start(records)
    thr = st["safety"]
    tracks = {a: _Track(p) for a, p in st["positions"].items() if a != "robot"}
    out = []
    for r in records:
        kind, agent, t = r["kind"], r["agent"], r["t"]
        if kind == "move" and agent in tracks:
            tracks[agent].set(r["frm"], r["to"], t, r["t1"])
        elif kind == "halt" and agent in tracks:
            tracks[agent].set(r["at"], r["at"], t, t)
        elif agent == "team" and kind in ("co_move", "halt"):
            frm, to = (r["frm"], r["to"]) if kind == "co_move" else (r["at"], r["at"])
            t1 = r.get("t1", t)
            for tr in tracks.values():
                tr.set(frm, to, t, t1)
        elif kind == "lay":
            x, y = r["at"]
            for a, tr in tracks.items():
                wx, wy = tr.at(t)
                d = math.hypot(wx - x, wy - y)
                if d < thr - POS_TOL:
                    out.append(f"t={t}: {a} at {d:.3f} m from the robot while laying "
                               f"(wall {r['wall']}, layer {r['layer']}, brick {r['brick']})")
    return out


def check_layer_order(records: list[dict]) -> list[str]:
    """Bricks go in order and a layer starts only after the previous one is cleaned."""
    out = []
    cleaned: set[tuple[int, int]] = set()
    prev = None
    for r in records:
        if r["kind"] == "layer_done":
            cleaned.add((r["wall"], r["layer"]))
        elif r["kind"] == "lay":
            cur = (r["wall"], r["layer"], r["brick"])
            if prev is not None:
                pw, pl, pb = prev
                ok = (cur == (pw, pl, pb + 1) or cur == (pw, pl + 1, 0) or cur == (pw + 1, 0, 0))
                if not ok:
                    out.append(f"t={r['t']}: brick {cur} follows {prev}")
                if cur[2] == 0 and (pw, pl) not in cleaned:
                    out.append(f"t={r['t']}: layer {cur[:2]} started before layer {(pw, pl)} was cleaned")
            elif cur != (0, 0, 0):
                out.append(f"t={r['t']}: first brick is {cur}")
            prev = cur
    return out


def check_conservation(records: list[dict]) -> list[str]:
    """Bricks move between stores without being created or lost."""
    st = _start(records)
    total, cap = st["total"], st["capacity"]
    lt, temp, carried, robot, laid = total, 0, 0, 0, 0
    out = []
    for r in records:
        k, t = r["kind"], r["t"]
        if k == "grab":
            if r["source"] == "lt":
                lt -= r["n"]
            else:
                temp -= r["n"]
            carried += r["n"]
            if carried != r["carried"]:
                out.append(f"t={t}: carried {carried} but trace says {r['carried']}")
        elif k in ("drop", "deposit"):
            temp += r["n"]
            carried -= r["n"]
            if temp != r["temp"]:
                out.append(f"t={t}: temp stock {temp} but trace says {r['temp']}")
        elif k == "add":
            carried -= r["n"]
            robot += r["n"]
            if robot != r["robot"]:
                out.append(f"t={t}: robot holds {robot} but trace says {r['robot']}")
        elif k == "lay":
            robot -= 1
            laid += 1
            if robot != r["bricks"]:
                out.append(f"t={t}: robot holds {robot} after laying but trace says {r['bricks']}")
        else:
            continue
        if min(lt, temp, carried, robot) < 0 or robot > cap:
            out.append(f"t={t}: stock out of range lt={lt} temp={temp} carried={carried} robot={robot}")
        if lt + temp + carried + robot + laid != total:
            out.append(f"t={t}: {lt + temp + carried + robot + laid} bricks accounted, expected {total}")
    for r in records:
        if r["kind"] == "complete" and laid != total:
            out.append(f"completed with {laid} of {total} bricks laid")
    return out


def check_working_hours(records: list[dict]) -> list[str]:
    """Bricks are laid and work trips start only inside the daily working window."""
    st = _start(records)
    day, period = st["day_length"], st["period"]
    out = []
    for r in records:
        if r["kind"] == "lay" or (r["kind"] == "move" and r.get("tag") == "work"):
            into = r["t"] - math.floor(r["t"] / period + 1e-12) * period
            if into > day + 1e-6:
                out.append(f"t={r['t']}: {r['agent']} {r['kind']} outside working hours")
    return out


def check_fatigue(records: list[dict]) -> list[str]:
    """Rests start below the demand and end only with the resume margin restored."""
    out = []
    resting: dict[str, float] = {}
    for r in records:
        a = r["agent"]
        if r["kind"] == "rest":
            if a in resting:
                out.append(f"t={r['t']}: {a} starts a rest while resting")
            if r["f"] >= r["demand"]:
                out.append(f"t={r['t']}: {a} rests with f={r['f']:.4f} >= demand {r['demand']}")
            resting[a] = r["demand"]
        elif r["kind"] == "resume":
            if a not in resting:
                out.append(f"t={r['t']}: {a} resumes without resting")
            if r["f"] < r["demand"] + RESUME_MARGIN - F_TOL:
                out.append(f"t={r['t']}: {a} resumes at f={r['f']:.4f} below {r['demand'] + RESUME_MARGIN}")
            resting.pop(a, None)
    return out


CHECKERS = {
    "safety": check_safety,
    "layer_order": check_layer_order,
    "conservation": check_conservation,
    "working_hours": check_working_hours,
    "fatigue": check_fatigue,
}


def check_all(trace: str | list[dict]) -> dict[str, list[str]]:
    records = parse_trace(trace) if isinstance(trace, str) else trace
    return {name: fn(records) for name, fn in CHECKERS.items()}
