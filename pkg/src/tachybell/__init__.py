"""Tachyon-communication bounds and Bell-test coincidence simulations."""

__version__ = "0.1.0"

from .bounds import BoundCurve, BoundInputs, DriftBudget, beta_t_min
from .correlations import EntangledState, FallbackKind, PolarizerSetting, TachyonModel
from .relativity import (
    SIDEREAL_DAY_S,
    ExperimentGeometry,
    PreferredFrameSpec,
    SpacetimeEvent,
)
from .simulation import BellSettings, CoincidenceTable, SimulationConfig, run_simulation

__all__ = [
    "BoundCurve",
    "BoundInputs",
    "DriftBudget",
    "beta_t_min",
    "EntangledState",
    "FallbackKind",
    "PolarizerSetting",
    "TachyonModel",
    "SIDEREAL_DAY_S",
    "ExperimentGeometry",
    "PreferredFrameSpec",
    "SpacetimeEvent",
    "BellSettings",
    "CoincidenceTable",
    "SimulationConfig",
    "run_simulation",
    "__version__",
]
