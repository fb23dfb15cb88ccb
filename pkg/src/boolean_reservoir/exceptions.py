"""
Exception hierarchy for the Boolean reservoir lab.

Every failure raised on purpose by the library derives from
``ReservoirLabError`` so the CLI can report it with its stage tag and a
non-zero exit status. Errors that signal a violated precondition also
derive from ``ValueError``.
"""

from typing import Optional


class ReservoirLabError(Exception):
    """Base class for all lab errors."""

    def __init__(self, message: str, stage: Optional[str] = None):
        super().__init__(message)
        self.stage = stage

    def with_stage(self, stage: str) -> "ReservoirLabError":
        if self.stage is None:
            self.stage = stage
        return self

    def __str__(self) -> str:
        message = super().__str__()
        if self.stage:
            return f"[{self.stage}] {message}"
        return message


class ConfigurationError(ReservoirLabError, ValueError):
    """Raised when an experiment or simulation config is invalid."""


class NetworkConstructionError(ReservoirLabError, ValueError):
    """Raised when a reservoir cannot be built from its hyperparameters."""


class SimulationError(ReservoirLabError):
    """Raised when a Glass-model simulation has to abort."""


class TrainingError(ReservoirLabError):
    """Raised when the linear readout cannot be trained."""


class DataGenerationError(ReservoirLabError):
    """Raised when Mackey-Glass integration produces unusable data."""


class AnalysisError(ReservoirLabError):
    """Raised when an analysis has no usable result."""


class HdlEmissionError(ReservoirLabError, ValueError):
    """Raised when a spec cannot be compiled to Verilog."""
