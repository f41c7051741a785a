import pytest

from hrcsim.config import RobotParams, ScenarioConfig, Strategy
from hrcsim.environment import Region, SiteLayout, Wall

ACCEPTANCE_LINES: list[str] = []


def small_layout(layers: int = 4) -> SiteLayout:
    """Two short walls, 275 bricks with the default brick; fast to simulate."""
    return SiteLayout(
        long_term_store=Region(-40.0, 0.0, -38.0, 2.0),
        temp_store=Region(0.5, 0.5, 1.5, 1.5),
        robot_store=Region(0.5, 5.0, 1.5, 6.0),
        work_zone=Region(0.0, 0.0, 20.0, 12.0),
        walls=(Wall((3.0, 3.0), (15.0, 3.0), layers), Wall((15.0, 3.0), (15.0, 9.0), 3)),
    )


def small_config(**kw) -> ScenarioConfig:
    strategy = Strategy(kw.pop("sl", 40), kw.pop("ci", 100.0))
    kw.setdefault("layout", small_layout())
    kw.setdefault("robot", RobotParams(capacity=60))
    return ScenarioConfig(strategy=strategy, **kw)


@pytest.fixture
def small_cfg():
    return small_config()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
