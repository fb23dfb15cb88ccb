"""Domain models shared by every stage of the lab."""

from .core import (
    DEFAULT_INVERTER_DELAY_NS,
    DEFAULT_NS_PER_MG_UNIT,
    FixedPointWord,
    Hyperparams,
    MgParams,
    ReservoirSpec,
    TimeSeries,
    TimeUnit,
    TrainedReadout,
)
from .results import (
    DecayConfig,
    DecayResult,
    DecayTrend,
    SpectrumResult,
    SweepAxis,
    SweepGrid,
    SweepRow,
)
from .runs import (
    FS_PER_NS,
    ClockedRun,
    EngineKind,
    InputSchedule,
    SimConfig,
    SimulationSettings,
    StateTrace,
)

__all__ = [
    "DEFAULT_INVERTER_DELAY_NS",
    "DEFAULT_NS_PER_MG_UNIT",
    "FS_PER_NS",
    "ClockedRun",
    "DecayConfig",
    "DecayResult",
    "DecayTrend",
    "EngineKind",
    "FixedPointWord",
    "Hyperparams",
    "InputSchedule",
    "MgParams",
    "ReservoirSpec",
    "SimConfig",
    "SimulationSettings",
    "SpectrumResult",
    "StateTrace",
    "SweepAxis",
    "SweepGrid",
    "SweepRow",
    "TimeSeries",
    "TimeUnit",
    "TrainedReadout",
]
