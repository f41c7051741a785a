"""Seeded generator of small but varied detailed-model scenarios."""
import random

from hrcsim.config import KeyParams, RobotParams, ScenarioConfig, Strategy, WorkerParams
from hrcsim.environment import Region, SiteLayout, Wall


def random_scenario(i: int) -> tuple[ScenarioConfig, KeyParams | None, int]:
    rng = random.Random(1000 + i)
    x0 = rng.uniform(3.5, 5.0)
    length = rng.uniform(4.0, 14.0)
    walls = [Wall((x0, 3.0), (x0 + length, 3.0), rng.randint(1, 30))]
    if rng.random() < 0.5:
        x1 = x0 + length
        walls.append(Wall((x1, 3.0), (x1, 3.0 + rng.uniform(2.0, 8.0)), rng.randint(1, 10)))
    layout = SiteLayout(
        long_term_store=Region(-rng.uniform(5, 200), 0.0, -3.0, 2.0),
        temp_store=Region(0.5, 0.5, 1.5, 1.5),
        robot_store=Region(0.5, 5.0, 1.5, 6.0),
        work_zone=Region(0.0, 0.0, 25.0, 14.0),
        walls=tuple(walls),
    )
    cap = rng.choice((30, 60, 120))
    worker = WorkerParams(
        walk_velocity=rng.uniform(0.5, 1.5),
        mortar_duration=rng.choice((5.0, 5.0, 60.0, 400.0)),
        grab_duration=rng.choice((30.0, 30.0, 300.0, 700.0)),
        drop_duration=rng.choice((30.0, 300.0)),
        preparation_duration=rng.uniform(300.0, 1200.0),
        installation_duration=rng.uniform(300.0, 1200.0),
        spread=rng.choice((0.0, 0.2)),
    )
    cfg = ScenarioConfig(
        layout=layout,
        robot=RobotParams(capacity=cap),
        worker=worker,
        strategy=Strategy(rng.randint(1, cap), rng.choice((100.0, 300.0, 800.0, 3800.0))),
        sensors=rng.random() < 0.5,
    )
    kp = None
    if rng.random() < 0.5:
        kp = KeyParams(rng.uniform(50.0, 4000.0), rng.choice((0.0, 0.3, 1.0)), rng.uniform(0.0, 600.0))
    return cfg, kp, rng.randint(0, 10_000)
