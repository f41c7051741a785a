"""Hand-stepped service-model schedules with their pencil-and-paper results.

Each entry gives the configuration and the expected log, worked out by
stepping the rules in ``hrcsim.lofi`` by hand.  Equal-time events fire in
scheduling order.
"""
from hrcsim.lofi import LofiConfig

# 2 robots, 1 worker, ci=2.  Robot 0 is checked 0-2 (first check, no
# sample, 6 bricks left).  Robot 1 is checked from 4 and halts at 6 while
# under inspection: a successful request answered at the check end with a
# supplement 6-9.  Robot 0 halts at 8 with the worker busy: failed, queued,
# served 9-12 (wait 1).  The check at 14 samples robot 0: 14-12=2.
# Ten kernel events up to the horizon.
TWO_ROBOTS_CONTENTION = dict(
    cfg=LofiConfig(n_robots=2, n_bs_workers=1, t_check=2, t_supply_temp=3, t_supply_long=8,
                   consume_interval=1, capacity=10, sl=5, ci=2, initial_bricks=(8, 6),
                   initial_temp=100, worker_offsets=(0,), horizon=17),
    num_success=1, num_failed=1, waits=[1.0], gci_samples=[2.0],
    occupied_rate=0.5, waiting_time=1.0, gci=2.0,
)

# 1 robot, 1 worker.  Checks at 3 (first, no sample) and 9 (sample 9-5=4).
# The robot halts at 10 while being checked, so the request succeeds and the
# check ending at 11 supplies it until 15.  Check at 19 (sample 19-15=4)
# finds 4 < 5 and supplies 21-25; the halt at 25 comes while the robot is
# being served and raises nothing.
ONE_ROBOT_HALT_DURING_CHECK = dict(
    cfg=LofiConfig(n_robots=1, n_bs_workers=1, t_check=2, t_supply_temp=4, t_supply_long=8,
                   consume_interval=1, capacity=10, sl=5, ci=4, initial_bricks=(10,),
                   initial_temp=100, worker_offsets=(3,), horizon=27),
    num_success=1, num_failed=0, waits=[], gci_samples=[4.0, 4.0],
    occupied_rate=0.0, waiting_time=0.0, gci=4.0,
)

# 2 robots, 1 worker alternating with ci=1.  Robot 0 is checked at 0 and 4
# (sample 4-1=3), supplied 5-7; robot 1 is checked at 2 and 8 (sample 8-3=5),
# supplied 9-11.  Mean GCI 4 exceeds the worker's ci.  Ten kernel events.
TWO_ROBOTS_ONE_WORKER = dict(
    cfg=LofiConfig(n_robots=2, n_bs_workers=1, t_check=1, t_supply_temp=2, t_supply_long=4,
                   consume_interval=1, capacity=10, sl=6, ci=1, initial_bricks=(10, 10),
                   initial_temp=50, worker_offsets=(0,), horizon=10.5),
    num_success=0, num_failed=0, waits=[], gci_samples=[3.0, 5.0],
    occupied_rate=0.0, waiting_time=0.0, gci=4.0,
)

# 1 robot, 2 workers with interleaved timers (offsets 0 and 2, ci=4).
# Check ends 1, 3, 6 and checks start 0, 2, 5, 7: samples 1, 2, 1.
# Mean GCI 4/3 is below ci.  Ten kernel events.
ONE_ROBOT_TWO_WORKERS = dict(
    cfg=LofiConfig(n_robots=1, n_bs_workers=2, t_check=1, t_supply_temp=2, t_supply_long=4,
                   consume_interval=1, capacity=20, sl=2, ci=4, initial_bricks=(7,),
                   initial_temp=50, worker_offsets=(0, 2), horizon=9),
    num_success=0, num_failed=0, waits=[], gci_samples=[1.0, 2.0, 1.0],
    occupied_rate=0.0, waiting_time=0.0, gci=4.0 / 3.0,
)

# 2 robots, 1 worker, empty temp store, request-driven.  Robot 1 halts at 2
# (served, long path to 5); robot 0 halts at 4 (failed, served 5-7, wait 1);
# robot 1 halts at 9 (served 9-11); robot 0 halts at 11 just before that
# supplement ends (failed, served at once, wait 0).  Only the first check
# happens, so there is no GCI sample.
TWO_ROBOTS_REQUESTS = dict(
    cfg=LofiConfig(n_robots=2, n_bs_workers=1, t_check=1, t_supply_temp=2, t_supply_long=3,
                   consume_interval=1, capacity=4, sl=2, ci=2, initial_bricks=(4, 2),
                   initial_temp=0, worker_offsets=(0,), horizon=12),
    num_success=2, num_failed=2, waits=[1.0, 0.0], gci_samples=[],
    occupied_rate=0.5, waiting_time=0.5, gci=None,
)

# the three schedules of at most ten events
ORACLES = {
    "two_robots_contention": TWO_ROBOTS_CONTENTION,
    "two_robots_one_worker": TWO_ROBOTS_ONE_WORKER,
    "one_robot_two_workers": ONE_ROBOT_TWO_WORKERS,
}

EXTRA_SCHEDULES = {
    "one_robot_halt_during_check": ONE_ROBOT_HALT_DURING_CHECK,
    "two_robots_requests": TWO_ROBOTS_REQUESTS,
}
