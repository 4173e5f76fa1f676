"""Structured run configuration: TOML documents with explicit unit suffixes.

A document can carry up to three sections, one per front-end command family:

    [bounds]      -> lower-bound sweeps
    [simulation]  -> Monte Carlo coincidence runs
    [drift]       -> thermal path-drift budget

Angles accept degrees ("22.5 deg"), lengths accept um/mm/km, times accept
s/min/h.  Unknown keys are rejected.
"""

from __future__ import annotations

import math
from typing import Annotated, Any

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from pydantic import BaseModel, BeforeValidator, ConfigDict, ValidationError

from .bounds import AIR_GROUP_INDEX_DT, BoundInputs, DriftBudget
from .correlations import EntangledState, FallbackKind, TachyonModel
from .errors import ConfigError
from .relativity import SIDEREAL_DAY_S, ExperimentGeometry, PreferredFrameSpec
from .simulation import BellSettings, SimulationConfig
from .units import parse_quantity

Length = Annotated[float, BeforeValidator(lambda v: parse_quantity(v, "length"))]
Time = Annotated[float, BeforeValidator(lambda v: parse_quantity(v, "time"))]
Angle = Annotated[float, BeforeValidator(lambda v: parse_quantity(v, "angle"))]
Temperature = Annotated[float, BeforeValidator(lambda v: parse_quantity(v, "temperature"))]
Bare = Annotated[float, BeforeValidator(lambda v: parse_quantity(v, "dimensionless"))]


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class BoundsSection(_Section):
    rho_bar: Bare
    delta_t_acq: Time
    sidereal_period: Time = SIDEREAL_DAY_S
    chi: Angle = math.pi / 2
    label: str = ""

    def to_inputs(self, beta: float = 0.0) -> BoundInputs:
        return BoundInputs(
            rho_bar=self.rho_bar,
            delta_t_acq=self.delta_t_acq,
            sidereal_period=self.sidereal_period,
            beta=beta,
            chi=self.chi,
        )


class SimulationSection(_Section):
    d_ab: Length
    delta_d: Length
    delta_t_acq: Time
    gamma_align: Angle = 0.0
    sidereal_period: Time = SIDEREAL_DAY_S
    beta: Bare = 0.0
    chi: Angle = math.pi / 2
    t0: Time = 0.0
    beta_t: Bare = math.inf
    fallback: str = "uncorrelated"
    phi: Angle = 0.0
    a: Angle = 0.0
    a_prime: Angle = math.pi / 4
    b: Angle = math.pi / 8
    b_prime: Angle = 3 * math.pi / 8
    pairs_per_second: Bare = 1e5
    bin_width: Time | None = None
    path_mismatch: Length | None = None
    seed: int = 0
    duration: Time | None = None

    def to_config(self, seed: int | None = None) -> SimulationConfig:
        try:
            fallback = FallbackKind(self.fallback)
        except ValueError:
            raise ConfigError(
                f"unknown fallback {self.fallback!r} "
                f"(known: {[k.value for k in FallbackKind]})"
            )
        return SimulationConfig(
            geometry=ExperimentGeometry(
                d_ab=self.d_ab,
                delta_d=self.delta_d,
                delta_t_acq=self.delta_t_acq,
                gamma_align=self.gamma_align,
                sidereal_period=self.sidereal_period,
            ),
            pf=PreferredFrameSpec(beta=self.beta, chi=self.chi, t0=self.t0),
            tachyon=TachyonModel(beta_t=self.beta_t, fallback=fallback),
            state=EntangledState(phi=self.phi),
            settings=BellSettings(
                a=self.a, a_prime=self.a_prime, b=self.b, b_prime=self.b_prime
            ),
            pairs_per_second=self.pairs_per_second,
            bin_width=self.bin_width,
            path_mismatch=self.path_mismatch,
            seed=self.seed if seed is None else seed,
            duration=self.duration,
        )


class DriftSection(_Section):
    l0: Length
    delta_T: Temperature
    dn_dT: Bare = AIR_GROUP_INDEX_DT
    delta_d: Length | None = None

    def to_budget(self) -> DriftBudget:
        return DriftBudget(l0=self.l0, delta_T=self.delta_T, dn_dT=self.dn_dT)


class RunConfig(_Section):
    bounds: BoundsSection | None = None
    simulation: SimulationSection | None = None
    drift: DriftSection | None = None


def parse_run_config(doc: dict[str, Any]) -> RunConfig:
    try:
        return RunConfig.model_validate(doc)
    except ValidationError as exc:
        raise ConfigError(str(exc))


def load_run_config(path) -> RunConfig:
    try:
        with open(path, "rb") as fh:
            doc = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML in {path}: {exc}")
    return parse_run_config(doc)
