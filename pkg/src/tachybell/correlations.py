"""Pair-correlation models: quantum, uncorrelated, and local-hidden-variable.

The entangled state is (|H,H> + e^{i phi} |V,V>) / sqrt(2).  Polarizer angles
are measured from the vertical axis; a removed polarizer transmits every
photon.  When superluminal communication between the two measurement events
is infeasible, outcomes are drawn from a fallback model instead of quantum
probabilities: either fully uncorrelated fair outcomes, or a deterministic
local-hidden-variable model with a shared hidden polarization angle.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

from .errors import ConfigError

_SUM_TOL = 1e-12


@dataclass(frozen=True)
class EntangledState:
    """Relative phase of the |V,V> component, radians."""

    phi: float = 0.0


@dataclass(frozen=True)
class PolarizerSetting:
    """A polarizer orientation (radians from vertical), or removed entirely."""

    angle: float | None

    def __post_init__(self):
        if self.angle is not None:
            object.__setattr__(self, "angle", float(self.angle) % math.pi)

    @property
    def removed(self) -> bool:
        return self.angle is None


#: The distinguished removed-polarizer setting.
REMOVED = PolarizerSetting(None)


class FallbackKind(Enum):
    UNCORRELATED = "uncorrelated"
    DETERMINISTIC_LHV = "deterministic_lhv"


@dataclass(frozen=True)
class TachyonModel:
    """Tachyon reduced speed (> 1, may be inf) plus no-communication fallback."""

    beta_t: float
    fallback: FallbackKind = FallbackKind.UNCORRELATED

    def __post_init__(self):
        if not self.beta_t > 1.0:
            raise ConfigError(f"beta_t must be > 1, got {self.beta_t}")


@dataclass(frozen=True)
class JointOutcomeDistribution:
    """Probabilities of (pass, pass), (pass, fail), (fail, pass), (fail, fail)."""

    p_pp: float
    p_pf: float
    p_fp: float
    p_ff: float

    def __post_init__(self):
        probs = (self.p_pp, self.p_pf, self.p_fp, self.p_ff)
        if any(p < -_SUM_TOL or p > 1.0 + _SUM_TOL for p in probs):
            raise ConfigError(f"probabilities out of [0, 1]: {probs}")
        if abs(sum(probs) - 1.0) > _SUM_TOL:
            raise ConfigError(f"probabilities must sum to 1, got {sum(probs)}")

    @property
    def marginal_a(self) -> float:
        return self.p_pp + self.p_pf

    @property
    def marginal_b(self) -> float:
        return self.p_pp + self.p_fp


def _from_pp_and_marginals(p_pp: float, p_a: float, p_b: float) -> JointOutcomeDistribution:
    p_pf = p_a - p_pp
    p_fp = p_b - p_pp
    p_ff = 1.0 - p_pp - p_pf - p_fp
    # Clamp float dust so the distribution invariant holds exactly at the edges.
    clamp = lambda p: min(1.0, max(0.0, p))
    return JointOutcomeDistribution(clamp(p_pp), clamp(p_pf), clamp(p_fp), clamp(p_ff))


def qm_joint(state: EntangledState, a: PolarizerSetting, b: PolarizerSetting) -> JointOutcomeDistribution:
    """Quantum joint outcome distribution for the entangled state.

    p_pp = 1/2 |cos(ta) cos(tb) + e^{i phi} sin(ta) sin(tb)|^2; each present
    side has marginal pass probability 1/2 regardless of phi; a removed side
    always passes.
    """
    if a.removed and b.removed:
        return JointOutcomeDistribution(1.0, 0.0, 0.0, 0.0)
    if a.removed or b.removed:
        return _from_pp_and_marginals(
            0.5, 1.0 if a.removed else 0.5, 1.0 if b.removed else 0.5
        )
    amp = (
        math.cos(a.angle) * math.cos(b.angle)
        + cmath.exp(1j * state.phi) * math.sin(a.angle) * math.sin(b.angle)
    )
    p_pp = 0.5 * abs(amp) ** 2
    return _from_pp_and_marginals(p_pp, 0.5, 0.5)


def _acute_angle(x: float, y: float) -> float:
    """Acute angle between two polarization directions (mod pi)."""
    d = abs(x - y) % math.pi
    return min(d, math.pi - d)


def lhv_passes(hidden_angle: float, setting: PolarizerSetting) -> bool:
    """Deterministic threshold rule: pass iff hidden angle within pi/4 of the axis."""
    if setting.removed:
        return True
    return _acute_angle(hidden_angle, setting.angle) < math.pi / 4


def fallback_joint(
    model: TachyonModel,
    hidden: float | None,
    a: PolarizerSetting,
    b: PolarizerSetting,
) -> JointOutcomeDistribution:
    """No-communication outcome distribution.

    Uncorrelated: independent fair outcomes (the hidden sample is ignored).
    Deterministic LHV: both outcomes are deterministic functions of the shared
    hidden polarization angle, so probabilities are 0/1 for a given sample.
    """
    if model.fallback is FallbackKind.UNCORRELATED:
        p_a = 1.0 if a.removed else 0.5
        p_b = 1.0 if b.removed else 0.5
        return _from_pp_and_marginals(p_a * p_b, p_a, p_b)
    if model.fallback is FallbackKind.DETERMINISTIC_LHV:
        if hidden is None:
            raise ConfigError("deterministic LHV fallback requires a hidden sample")
        p_a = 1.0 if lhv_passes(hidden, a) else 0.0
        p_b = 1.0 if lhv_passes(hidden, b) else 0.0
        return _from_pp_and_marginals(p_a * p_b, p_a, p_b)
    raise ConfigError(f"unknown fallback kind: {model.fallback!r}")


def lhv_joint_lambda_averaged(a: PolarizerSetting, b: PolarizerSetting) -> JointOutcomeDistribution:
    """Deterministic-LHV joint distribution averaged over a uniform hidden angle.

    Both pass-arcs have length pi/2 on the mod-pi circle, so the coincidence
    probability is the arc overlap: 1/2 - acute(ta - tb)/pi.
    """
    p_a = 1.0 if a.removed else 0.5
    p_b = 1.0 if b.removed else 0.5
    if a.removed or b.removed:
        p_pp = p_a * p_b
    else:
        p_pp = 0.5 - _acute_angle(a.angle, b.angle) / math.pi
    return _from_pp_and_marginals(p_pp, p_a, p_b)


def effective_joint(
    model: TachyonModel,
    state: EntangledState,
    feasible: bool,
    hidden: float | None,
    a: PolarizerSetting,
    b: PolarizerSetting,
) -> JointOutcomeDistribution:
    """Quantum distribution if communication is feasible, else the fallback."""
    if feasible:
        return qm_joint(state, a, b)
    return fallback_joint(model, hidden, a, b)
