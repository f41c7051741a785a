"""Ergonomic models separating workers from robots: forgetting and muscle fatigue.

Fatigue is tracked as the available strength ``f_cem`` as a fraction of MVC.
Workload durations and recovery intervals are in minutes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

# %MVC demand of the four loaded work elements
DEMANDS = {
    "extra-mortar-removing": 0.10,
    "grabbing": 0.40,
    "dropping": 0.40,
    "adding": 0.40,
}
RESUME_MARGIN = 0.10
FAST_RATE = 0.05      # per minute, below the knee
SLOW_RATE = 0.003     # per minute, at or above the knee
KNEE = 0.90


@dataclass(frozen=True)
class ForgettingParams:
    A: float = 1.0
    B: float = 0.01

    def __post_init__(self):
        if not (0.0 < self.A <= 1.0):
            raise ValueError("forgetting A must lie in (0, 1]")
        if self.B < 0:
            raise ValueError("forgetting B must be non-negative")


@dataclass(frozen=True)
class FatigueState:
    f_cem: float = 1.0
    resting: bool = False

    def __post_init__(self):
        if not (0.0 <= self.f_cem <= 1.0):
            raise ValueError(f"f_cem out of [0, 1]: {self.f_cem}")


def remember_probability(ci: float, p: ForgettingParams) -> float:
    """A * exp(-B * ci), clamped to [0, 1]; ``ci`` is in the unit B is expressed in."""
    if ci < 0:
        raise ValueError("check interval must be non-negative")
    return min(1.0, max(0.0, p.A * math.exp(-p.B * ci)))


def apply_workload(state: FatigueState, demand: float, d: float) -> FatigueState:
    if state.resting:
        raise ValueError("cannot load a resting worker")
    if d < 0:
        raise ValueError("duration must be non-negative")
    return replace(state, f_cem=state.f_cem * math.exp(-demand * d))


def recover_value(f: float, dt: float) -> float:
    """Piecewise-exact linear recovery of ``f`` over ``dt`` minutes."""
    if dt <= 0 or f >= 1.0:
        return min(f, 1.0)
    if f < KNEE:
        t_knee = (KNEE - f) / FAST_RATE
        if dt <= t_knee:
            return f + FAST_RATE * dt
        f, dt = KNEE, dt - t_knee
    return min(1.0, f + SLOW_RATE * dt)


def recover(state: FatigueState, dt: float) -> FatigueState:
    if dt < 0:
        raise ValueError("dt must be non-negative")
    return replace(state, f_cem=recover_value(state.f_cem, dt))


def time_to_recover(f: float, target: float) -> float:
    """Minutes of rest needed to lift ``f`` to ``target`` (inverse of recover)."""
    target = min(target, 1.0)
    if f >= target:
        return 0.0
    if target <= KNEE:
        return (target - f) / FAST_RATE
    t = 0.0
    if f < KNEE:
        t = (KNEE - f) / FAST_RATE
        f = KNEE
    return t + (target - f) / SLOW_RATE


def can_start(state: FatigueState, demand: float) -> bool:
    return state.f_cem >= demand


def should_resume(state: FatigueState, demand: float) -> bool:
    # tolerance so a rest computed by time_to_recover lands on the right side
    return state.f_cem >= demand + RESUME_MARGIN - 1e-12
