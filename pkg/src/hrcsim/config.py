"""Scenario configuration: dataclasses with field defaults and a YAML loader.

Schema problems are reported with the line of the offending node; invariant
violations name the field.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any

import yaml

from .environment import BrickSpec, LayoutError, Region, SiteLayout, Wall, default_layout
from .human import ForgettingParams


class ConfigError(ValueError):
    def __init__(self, msg: str, line: int | None = None, field_name: str | None = None):
        self.line = line
        self.field_name = field_name
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{msg}")


@dataclass(frozen=True)
class RobotParams:
    capacity: int = 300
    lay_duration: float = 10.0
    move_velocity: float = 0.2


@dataclass(frozen=True)
class WorkerParams:
    walk_velocity: float = 0.75
    mortar_duration: float = 5.0
    supplement_duration: float = 10.0
    preparation_duration: float = 1200.0
    installation_duration: float = 1200.0
    grab_duration: float = 30.0
    drop_duration: float = 30.0
    move_robot_velocity: float = 0.33
    carry_velocity: float = 0.67
    check_duration: float = 5.0
    spread: float = 0.2


@dataclass(frozen=True)
class Strategy:
    sl: int = 300
    ci: float = 100.0

    def __post_init__(self):
        # ints and floats must give identical traces
        object.__setattr__(self, "ci", float(self.ci))


@dataclass(frozen=True)
class KeyParams:
    """Coupling parameters handed from the service model to the detailed one."""

    gci: float
    occupied_rate: float = 0.0
    wt: float = 0.0

    def __post_init__(self):
        for name in ("gci", "occupied_rate", "wt"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not self.gci > 0:
            raise ConfigError("gci must be positive", field_name="gci")
        if not 0.0 <= self.occupied_rate <= 1.0:
            raise ConfigError("or must lie in [0, 1]", field_name="or")
        if self.wt < 0:
            raise ConfigError("wt must be non-negative", field_name="wt")


@dataclass(frozen=True)
class TimeParams:
    day_length: float = 8 * 3600.0
    period: float = 24 * 3600.0
    max_days: int = 60


@dataclass(frozen=True)
class LofiParams:
    horizon_days: int = 20
    seeds: int = 5
    min_samples: int = 20


@dataclass(frozen=True)
class ScenarioConfig:
    layout: SiteLayout = field(default_factory=default_layout)
    brick: BrickSpec = field(default_factory=BrickSpec)
    robot: RobotParams = field(default_factory=RobotParams)
    worker: WorkerParams = field(default_factory=WorkerParams)
    forgetting: ForgettingParams = field(default_factory=ForgettingParams)
    # seconds per unit of the check interval in the forgetting exponent (1: B per second)
    forgetting_unit: float = 1.0
    strategy: Strategy = field(default_factory=Strategy)
    n_robots: int = 1
    n_bs_workers: int = 1
    sensors: bool = False
    alert_duration: float = 5.0
    time: TimeParams = field(default_factory=TimeParams)
    lofi: LofiParams = field(default_factory=LofiParams)
    key_params: KeyParams | None = None
    seed: int = 0
    reps: int = 5

    def __post_init__(self):
        validate(self)

    def with_strategy(self, sl: int | None = None, ci: float | None = None) -> "ScenarioConfig":
        s = self.strategy
        return replace(self, strategy=Strategy(s.sl if sl is None else sl, s.ci if ci is None else ci))


def validate(cfg: ScenarioConfig) -> None:
    def need(cond: bool, name: str, msg: str):
        if not cond:
            raise ConfigError(f"{name}: {msg}", field_name=name)

    need(cfg.robot.capacity >= 1, "robot.capacity", "must be >= 1")
    need(cfg.robot.lay_duration > 0, "robot.lay_duration", "must be positive")
    need(cfg.robot.move_velocity > 0, "robot.move_velocity", "must be positive")
    for f in dataclasses.fields(WorkerParams):
        v = getattr(cfg.worker, f.name)
        if f.name == "spread":
            need(0.0 <= v < 1.0, "worker.spread", "must lie in [0, 1)")
        else:
            need(v > 0, f"worker.{f.name}", "must be positive")
    need(0 < cfg.strategy.sl <= cfg.robot.capacity, "strategy.sl",
         f"must satisfy 0 < sl <= robot.capacity ({cfg.robot.capacity}), got {cfg.strategy.sl}")
    need(cfg.strategy.ci > 0, "strategy.ci", "must be positive")
    need(cfg.n_robots >= 1, "n_robots", "must be >= 1")
    need(cfg.n_bs_workers >= 1, "n_bs_workers", "must be >= 1")
    need(cfg.forgetting_unit > 0, "forgetting.interval_unit", "must be positive")
    need(cfg.alert_duration > 0, "sensor.alert_duration", "must be positive")
    need(0 < cfg.time.day_length <= cfg.time.period, "time.day_length", "must lie in (0, period]")
    need(cfg.time.max_days >= 1, "time.max_days", "must be >= 1")
    need(cfg.lofi.horizon_days >= 1, "lofi.horizon_days", "must be >= 1")
    need(cfg.lofi.seeds >= 1, "lofi.seeds", "must be >= 1")
    need(cfg.reps >= 1, "reps", "must be >= 1")
    # workers wait at these spots; inside the safety radius of a brick they
    # would hold the robot back indefinitely
    thr = cfg.brick.safety_distance
    for name in ("temp_store", "robot_store"):
        need(cfg.layout.clear_of_walls(getattr(cfg.layout, name).center, thr), f"layout.{name}",
             f"centre must be at least the safety distance ({thr:.2f} m) from every wall")


# ---------------------------------------------------------------- YAML layer

_SECTIONS: dict[str, dict[str, type]] = {
    "robot": {"capacity": int, "lay_duration": float, "move_velocity": float},
    "worker": {f.name: float for f in dataclasses.fields(WorkerParams)},
    "strategy": {"sl": int, "ci": float},
    "forgetting": {"A": float, "B": float, "interval_unit": float},
    "sensor": {"enabled": bool, "alert_duration": float},
    "time": {"day_length": float, "period": float, "max_days": int},
    "lofi": {"horizon_days": int, "seeds": int, "min_samples": int},
    "key_params": {"gci": float, "or": float, "wt": float},
    "brick": {"length": float},
}
_SCALARS = {"seed": int, "reps": int, "n_robots": int, "n_bs_workers": int, "sensors": bool}


def _line(node) -> int:
    return node.start_mark.line + 1


def _scalar(node, typ: type, name: str):
    if not isinstance(node, yaml.ScalarNode):
        raise ConfigError(f"{name}: expected a scalar", _line(node), name)
    val = yaml.safe_load(node.value) if node.tag != "tag:yaml.org,2002:str" else node.value
    if typ is bool:
        if not isinstance(val, bool):
            raise ConfigError(f"{name}: expected true/false, got {node.value!r}", _line(node), name)
        return val
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ConfigError(f"{name}: expected a number, got {node.value!r}", _line(node), name)
    if typ is int:
        if float(val) != int(val):
            raise ConfigError(f"{name}: expected an integer, got {node.value!r}", _line(node), name)
        return int(val)
    return float(val)


def _mapping(node, name: str) -> list[tuple[str, Any, Any]]:
    if not isinstance(node, yaml.MappingNode):
        raise ConfigError(f"{name or 'document'}: expected a mapping", _line(node), name or None)
    out = []
    for k, v in node.value:
        out.append((k.value, k, v))
    return out


def _point(node, name: str) -> tuple[float, float]:
    if not isinstance(node, yaml.SequenceNode) or len(node.value) != 2:
        raise ConfigError(f"{name}: expected [x, y]", _line(node), name)
    return (_scalar(node.value[0], float, name), _scalar(node.value[1], float, name))


def _region(node, name: str) -> Region:
    if not isinstance(node, yaml.SequenceNode) or len(node.value) != 4:
        raise ConfigError(f"{name}: expected [x0, y0, x1, y1]", _line(node), name)
    vals = [_scalar(n, float, name) for n in node.value]
    try:
        return Region(*vals)
    except LayoutError as e:
        raise ConfigError(f"{name}: {e}", _line(node), name) from None


def _layout(node) -> SiteLayout:
    base = default_layout()
    kw: dict[str, Any] = {}
    for key, knode, vnode in _mapping(node, "layout"):
        name = f"layout.{key}"
        if key in ("long_term_store", "temp_store", "robot_store", "work_zone"):
            kw[key] = _region(vnode, name)
        elif key == "walls":
            if not isinstance(vnode, yaml.SequenceNode):
                raise ConfigError(f"{name}: expected a list", _line(vnode), name)
            walls = []
            for i, wnode in enumerate(vnode.value):
                wname = f"{name}[{i}]"
                fields = {k: v for k, _, v in _mapping(wnode, wname)}
                extra = set(fields) - {"start", "end", "layers"}
                if extra:
                    raise ConfigError(f"{wname}: unknown key {sorted(extra)[0]!r}", _line(wnode), wname)
                if not {"start", "end", "layers"} <= set(fields):
                    raise ConfigError(f"{wname}: needs start, end and layers", _line(wnode), wname)
                try:
                    walls.append(Wall(_point(fields["start"], wname + ".start"),
                                      _point(fields["end"], wname + ".end"),
                                      _scalar(fields["layers"], int, wname + ".layers")))
                except LayoutError as e:
                    raise ConfigError(f"{wname}: {e}", _line(wnode), wname) from None
            kw["walls"] = tuple(walls)
        else:
            raise ConfigError(f"unknown key {name!r}", _line(knode), name)
    try:
        return replace(base, **kw)
    except LayoutError as e:
        raise ConfigError(f"layout: {e}", _line(node), "layout") from None


def config_from_node(root) -> ScenarioConfig:
    if root is None:
        return ScenarioConfig()
    vals: dict[str, dict[str, Any]] = {s: {} for s in _SECTIONS}
    top: dict[str, Any] = {}
    layout = None
    for key, knode, vnode in _mapping(root, ""):
        if key in _SCALARS:
            top[key] = _scalar(vnode, _SCALARS[key], key)
        elif key == "layout":
            layout = _layout(vnode)
        elif key in _SECTIONS:
            for sub, sknode, svnode in _mapping(vnode, key):
                typ = _SECTIONS[key].get(sub)
                if typ is None:
                    raise ConfigError(f"unknown key '{key}.{sub}'", _line(sknode), f"{key}.{sub}")
                vals[key][sub] = _scalar(svnode, typ, f"{key}.{sub}")
        else:
            raise ConfigError(f"unknown key {key!r}", _line(knode), key)

    fg = vals["forgetting"]
    kw: dict[str, Any] = dict(top)
    try:
        kw["forgetting"] = ForgettingParams(fg.get("A", 1.0), fg.get("B", 0.01))
    except ValueError as e:
        raise ConfigError(f"forgetting: {e}", field_name="forgetting") from None
    if "interval_unit" in fg:
        kw["forgetting_unit"] = fg["interval_unit"]
    kw["robot"] = RobotParams(**vals["robot"])
    kw["worker"] = WorkerParams(**vals["worker"])
    kw["strategy"] = Strategy(**vals["strategy"])
    kw["time"] = TimeParams(**vals["time"])
    kw["lofi"] = LofiParams(**vals["lofi"])
    if vals["brick"]:
        try:
            kw["brick"] = BrickSpec(vals["brick"]["length"])
        except LayoutError as e:
            raise ConfigError(f"brick.length: {e}", field_name="brick.length") from None
    sen = vals["sensor"]
    if "enabled" in sen:
        kw["sensors"] = sen["enabled"]
    if "alert_duration" in sen:
        kw["alert_duration"] = sen["alert_duration"]
    if vals["key_params"]:
        kp = vals["key_params"]
        if "gci" not in kp:
            raise ConfigError("key_params.gci is required when key_params is given", field_name="key_params.gci")
        kw["key_params"] = KeyParams(kp["gci"], kp.get("or", 0.0), kp.get("wt", 0.0))
    if layout is not None:
        kw["layout"] = layout
    return ScenarioConfig(**kw)


def loads_config(text: str) -> ScenarioConfig:
    try:
        root = yaml.compose(text, Loader=yaml.SafeLoader)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        raise ConfigError(f"malformed YAML: {getattr(e, 'problem', e)}",
                          mark.line + 1 if mark else None) from None
    return config_from_node(root)


def load_config(path: str | Path) -> ScenarioConfig:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as e:
        raise ConfigError(f"cannot read {p}: {e.strerror}") from None
    return loads_config(text)
