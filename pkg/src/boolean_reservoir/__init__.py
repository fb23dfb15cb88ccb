"""
Boolean Reservoir Lab.

Simulation, training, analysis and Verilog emission for autonomous
time-delay Boolean network reservoir computers predicting the
Mackey-Glass system.
"""

from .exceptions import (
    AnalysisError,
    ConfigurationError,
    DataGenerationError,
    HdlEmissionError,
    NetworkConstructionError,
    ReservoirLabError,
    SimulationError,
    TrainingError,
)
from .models import Hyperparams, MgParams, ReservoirSpec, TimeSeries, TrainedReadout
from .network import build_reservoir, hardware_example_spec

__version__ = "1.0.0"

__all__ = [
    "AnalysisError",
    "ConfigurationError",
    "DataGenerationError",
    "HdlEmissionError",
    "Hyperparams",
    "MgParams",
    "NetworkConstructionError",
    "ReservoirLabError",
    "ReservoirSpec",
    "SimulationError",
    "TimeSeries",
    "TrainedReadout",
    "TrainingError",
    "build_reservoir",
    "hardware_example_spec",
    "__version__",
]
