"""Glass-model simulation of autonomous Boolean networks."""

from .engine import GlassEngine
from .event_driven import EventDrivenEngine
from .fixed_step import FixedStepEngine
from .glass import crossing_time, relax_node, time_to_flip
from .runner import make_engine, reference_step_ns, simulate

__all__ = [
    "EventDrivenEngine",
    "FixedStepEngine",
    "GlassEngine",
    "crossing_time",
    "make_engine",
    "reference_step_ns",
    "relax_node",
    "simulate",
    "time_to_flip",
]
