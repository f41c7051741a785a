from .model import HifiModel, HifiResult, run_hifi
from .sensor import SensorState, sensor_step
from .working_hour import working_hour_step

__all__ = ["HifiModel", "HifiResult", "run_hifi", "SensorState", "sensor_step", "working_hour_step"]
