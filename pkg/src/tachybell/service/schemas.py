"""Request/response models for the HTTP service."""

from __future__ import annotations

import math
from typing import Literal

from pydantic import BaseModel, ConfigDict

from ..config import BoundsSection, DriftSection, SimulationSection


class _Model(BaseModel):
    model_config = ConfigDict(extra="forbid")


class BetaGrid(_Model):
    """Either an explicit list of frame speeds or a lo:hi:n generated grid."""

    values: list[float] | None = None
    lo: float | None = None
    hi: float | None = None
    n: int | None = None
    spacing: Literal["log", "lin"] = "log"


class BoundsRequest(_Model):
    preset: str | None = None
    inputs: BoundsSection | None = None
    beta_grid: BetaGrid


class BoundsResponse(_Model):
    label: str
    rho_bar: float
    delta_t_acq: float
    sidereal_period: float
    chi: float
    points: list[list[float]]
    crossover_beta: float
    acquisition_ratio: float
    acquisition_satisfied: bool
    csv: str


class SimulateRequest(_Model):
    preset: str | None = None
    config: SimulationSection | None = None
    seed: int | None = None


class SimulateRow(_Model):
    bin_center_s: float
    combo: str
    count: int


class SimulateResponse(_Model):
    rows: list[SimulateRow]
    metadata: dict
    csv: str


class AnalyzeRequest(_Model):
    csv: str
    n_sigma: float = 3.0


class EstimateOut(_Model):
    bin_center_s: float
    m: float
    sigma_m: float
    n_norm: int
    verdict: str


class WindowOut(_Model):
    center: float
    start: float
    end: float
    n_bins: int


class AnalyzeResponse(_Model):
    estimates: list[EstimateOut]
    windows: list[WindowOut]
    anomaly_times: list[float]
    csv: str


class DriftRequest(_Model):
    preset: str | None = None
    config: DriftSection | None = None


class DriftResponse(_Model):
    drift_length_m: float
    delta_d_m: float | None
    exceeds_budget: bool | None
    report: str


def encode_nonfinite(x: float) -> float | str:
    """JSON-safe encoding of possibly infinite values."""
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x
