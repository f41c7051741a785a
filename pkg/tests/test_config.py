import math

import pytest

from hrcsim.config import ConfigError, ScenarioConfig, load_config, loads_config
from hrcsim.human import remember_probability


def test_empty_document_gives_defaults():
    cfg = loads_config("")
    assert cfg == ScenarioConfig()
    assert cfg.robot.capacity == 300 and cfg.robot.lay_duration == 10.0
    assert cfg.robot.move_velocity == 0.2
    w = cfg.worker
    assert (w.walk_velocity, w.mortar_duration, w.supplement_duration) == (0.75, 5.0, 10.0)
    assert (w.preparation_duration, w.installation_duration) == (1200.0, 1200.0)
    assert (w.grab_duration, w.drop_duration) == (30.0, 30.0)
    assert (w.move_robot_velocity, w.carry_velocity) == (0.33, 0.67)
    assert (cfg.forgetting.A, cfg.forgetting.B) == (1.0, 0.01)
    assert (cfg.strategy.sl, cfg.strategy.ci) == (300, 100.0)
    assert cfg.reps == 5 and cfg.sensors is False


def test_sl_above_capacity_names_the_field():
    with pytest.raises(ConfigError) as e:
        loads_config("strategy:\n  sl: 400\n")
    assert e.value.field_name == "strategy.sl"


def test_forgetting_override_changes_remember_probability():
    cfg = loads_config("forgetting:\n  B: 0.02\n")
    rp = remember_probability(100 / cfg.forgetting_unit, cfg.forgetting)
    assert abs(rp - math.exp(-2)) < 1e-12


def test_unknown_key_reports_its_line():
    with pytest.raises(ConfigError) as e:
        loads_config("seed: 3\nrobot:\n  capacity: 200\n  wheels: 4\n")
    assert e.value.line == 4
    assert e.value.field_name == "robot.wheels"


def test_type_errors_are_line_anchored():
    with pytest.raises(ConfigError) as e:
        loads_config("reps: 2\nstrategy:\n  ci: lots\n")
    assert e.value.line == 3
    with pytest.raises(ConfigError) as e:
        loads_config("sensors: maybe\n")
    assert e.value.line == 1


def test_malformed_yaml():
    with pytest.raises(ConfigError) as e:
        loads_config("robot: [1, 2\n")
    assert e.value.line is not None


def test_full_override_roundtrip(tmp_path):
    text = """
seed: 7
reps: 3
n_robots: 2
n_bs_workers: 1
strategy: {sl: 150, ci: 800}
sensor: {enabled: true, alert_duration: 5}
robot: {capacity: 250}
worker: {walk_velocity: 1.5}
key_params: {gci: 900, or: 0.25, wt: 40}
layout:
  walls:
    - {start: [5, 5], end: [17, 5], layers: 3}
"""
    p = tmp_path / "c.yaml"
    p.write_text(text)
    cfg = load_config(p)
    assert (cfg.seed, cfg.reps, cfg.n_robots, cfg.sensors) == (7, 3, 2, True)
    assert (cfg.strategy.sl, cfg.strategy.ci, cfg.robot.capacity) == (150, 800.0, 250)
    assert cfg.worker.walk_velocity == 1.5
    assert (cfg.key_params.gci, cfg.key_params.occupied_rate, cfg.key_params.wt) == (900, 0.25, 40)
    assert cfg.layout.total_bricks(cfg.brick) == 150


def test_layout_errors():
    with pytest.raises(ConfigError) as e:
        loads_config("layout:\n  walls:\n    - {start: [5, 5], end: [500, 5], layers: 1}\n")
    assert e.value.field_name == "layout"
    with pytest.raises(ConfigError):
        loads_config("layout:\n  walls:\n    - {start: [5, 5], end: [5, 5], layers: 1}\n")


def test_invalid_values_rejected():
    for bad in ("reps: 0\n", "key_params: {gci: 100, or: 1.5}\n", "worker: {walk_velocity: 0}\n",
                "forgetting: {A: 2}\n", "n_robots: 0\n"):
        with pytest.raises(ConfigError):
            loads_config(bad)


def test_missing_file():
    with pytest.raises(ConfigError):
        load_config("/nonexistent/config.yaml")


def test_store_inside_safety_radius_is_rejected():
    with pytest.raises(ConfigError) as e:
        loads_config("layout:\n  temp_store: [4, 4, 5, 5]\n")
    assert e.value.field_name == "layout.temp_store"
