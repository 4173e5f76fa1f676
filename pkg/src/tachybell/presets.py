"""Bundled parameter presets.

The "fig3" bound presets scan path-equalization accuracy and acquisition time
around a common template; the "fig4" presets describe three benchmark
experiments (I: short-path lab run, II: long-fibre metropolitan link, III: a
1.6 km evacuated-gallery run).  Simulation and drift presets describe the same
1.6 km geometry.
"""

from __future__ import annotations

import math

from .config import BoundsSection, DriftSection, RunConfig, SimulationSection
from .errors import ConfigError
from .relativity import SIDEREAL_DAY_S

_T = SIDEREAL_DAY_S

BOUND_PRESETS: dict[str, BoundsSection] = {
    "fig3-a": BoundsSection(rho_bar=1e-3, delta_t_acq=0.1 * _T / math.pi, label="fig3-a"),
    "fig3-b": BoundsSection(rho_bar=1e-5, delta_t_acq=0.1 * _T / math.pi, label="fig3-b"),
    "fig3-c": BoundsSection(rho_bar=1e-6, delta_t_acq=0.1 * _T / math.pi, label="fig3-c"),
    "fig3-d": BoundsSection(rho_bar=1e-6, delta_t_acq=1e-3 * _T / math.pi, label="fig3-d"),
    "fig3-e": BoundsSection(rho_bar=1e-6, delta_t_acq=1e-7 * _T / math.pi, label="fig3-e"),
    "fig4-I": BoundsSection(rho_bar=1.6e-4, delta_t_acq=4.0, label="fig4-I"),
    "fig4-II": BoundsSection(rho_bar=5.4e-6, delta_t_acq=360.0, label="fig4-II"),
    "fig4-III": BoundsSection(rho_bar=1.9e-7, delta_t_acq=0.1, label="fig4-III"),
}

_EGO_BASE = dict(
    d_ab=1600.0,
    delta_d=220e-6,
    delta_t_acq=0.1,
    beta=1e-3,
    chi=math.pi / 2,
    pairs_per_second=500.0,
    bin_width=20.0,
)

SIM_PRESETS: dict[str, SimulationSection] = {
    # Tachyon fast enough that quantum correlations hold at every sidereal time.
    "ego-qm": SimulationSection(**_EGO_BASE, beta_t=math.inf),
    # Below the detectable-velocity bound: anomaly windows around T/4 and 3T/4.
    "ego-subbound": SimulationSection(**_EGO_BASE, beta_t=1e6),
    # Above the bound: communication feasible in every bin.
    "ego-superbound": SimulationSection(**_EGO_BASE, beta_t=1e7),
}

DRIFT_PRESETS: dict[str, DriftSection] = {
    "ego-drift": DriftSection(l0=800.0, delta_T=1.0, delta_d=220e-6),
}


def preset_names() -> dict[str, list[str]]:
    return {
        "bounds": sorted(BOUND_PRESETS),
        "simulation": sorted(SIM_PRESETS),
        "drift": sorted(DRIFT_PRESETS),
    }


def get_bound_preset(name: str) -> BoundsSection:
    try:
        return BOUND_PRESETS[name]
    except KeyError:
        raise ConfigError(f"unknown bounds preset {name!r} (known: {sorted(BOUND_PRESETS)})")


def get_sim_preset(name: str) -> SimulationSection:
    try:
        return SIM_PRESETS[name]
    except KeyError:
        raise ConfigError(f"unknown simulation preset {name!r} (known: {sorted(SIM_PRESETS)})")


def get_drift_preset(name: str) -> DriftSection:
    try:
        return DRIFT_PRESETS[name]
    except KeyError:
        raise ConfigError(f"unknown drift preset {name!r} (known: {sorted(DRIFT_PRESETS)})")


def preset_run_config(name: str) -> RunConfig:
    """Any preset as a full config document (for serialization round-trips)."""
    if name in BOUND_PRESETS:
        return RunConfig(bounds=BOUND_PRESETS[name])
    if name in SIM_PRESETS:
        return RunConfig(simulation=SIM_PRESETS[name])
    if name in DRIFT_PRESETS:
        return RunConfig(drift=DRIFT_PRESETS[name])
    raise ConfigError(f"unknown preset {name!r}")
