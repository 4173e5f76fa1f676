"""Special-relativistic kinematics for the two polarization-measurement events.

Conventions: x is the West-East axis, z the North-South polar axis.  The
preferred frame moves with reduced speed beta at polar angle chi; its azimuth
advances uniformly with Earth rotation, so the frame velocity direction is

    beta_vec(t) = beta * (sin(chi) cos(w (t - t0)), sin(chi) sin(w (t - t0)), cos(chi))

with w = 2 pi / T and T one sidereal day.  All times are in seconds, all
lengths in meters; time coordinates of events are stored as ct (meters).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DomainError

#: Sidereal day in seconds (not specified by the physics here; IERS value).
SIDEREAL_DAY_S = 86164.0905


def _as_vec3(x) -> np.ndarray:
    v = np.asarray(x, dtype=float)
    if v.shape != (3,):
        raise ConfigError(f"expected a 3-vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ConfigError("vector components must be finite")
    return v


@dataclass(frozen=True)
class SpacetimeEvent:
    """A measurement event: spatial position (m) and time coordinate ct (m)."""

    x: np.ndarray
    ct: float

    def __post_init__(self):
        object.__setattr__(self, "x", _as_vec3(self.x))
        object.__setattr__(self, "ct", float(self.ct))
        if not math.isfinite(self.ct):
            raise ConfigError("ct must be finite")


@dataclass(frozen=True)
class PreferredFrameSpec:
    """Candidate tachyon preferred frame.

    beta: reduced speed V/c in [0, 1); chi: polar angle from the North-South
    axis, [0, pi]; t0: sidereal phase (s) at which the frame velocity lies in
    the x-z plane on the +x side.
    """

    beta: float
    chi: float
    t0: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.beta < 1.0:
            raise ConfigError(f"beta must be in [0, 1), got {self.beta}")
        if not 0.0 <= self.chi <= math.pi:
            raise ConfigError(f"chi must be in [0, pi], got {self.chi}")
        if not math.isfinite(self.t0):
            raise ConfigError("t0 must be finite")

    @property
    def lorentz_gamma(self) -> float:
        return 1.0 / math.sqrt(1.0 - self.beta**2)


@dataclass(frozen=True)
class ExperimentGeometry:
    """Detector geometry and timing of an Earth-based coincidence experiment."""

    d_ab: float
    delta_d: float
    delta_t_acq: float
    gamma_align: float = 0.0
    sidereal_period: float = SIDEREAL_DAY_S

    def __post_init__(self):
        if self.d_ab <= 0:
            raise ConfigError("d_ab must be > 0")
        if self.delta_d < 0:
            raise ConfigError("delta_d must be >= 0")
        if self.delta_d >= self.d_ab:
            raise ConfigError("delta_d must be < d_ab (rho_bar < 1)")
        if self.delta_t_acq <= 0:
            raise ConfigError("delta_t_acq must be > 0")
        if self.delta_t_acq >= self.sidereal_period:
            raise ConfigError("delta_t_acq must be < sidereal_period")
        if self.gamma_align < 0:
            raise ConfigError("gamma_align must be >= 0")

    @property
    def rho_bar(self) -> float:
        return self.delta_d / self.d_ab


def interval_squared(a: SpacetimeEvent, b: SpacetimeEvent) -> float:
    """Signed squared spacetime interval |x_b - x_a|^2 - (ct_b - ct_a)^2 (m^2)."""
    dx = b.x - a.x
    return float(dx @ dx - (b.ct - a.ct) ** 2)


def boost_delta_ct(delta_ct: float, delta_x, beta_vec) -> float:
    """Time-coordinate difference in the boosted frame: gamma (dct - beta.dx)."""
    dx = _as_vec3(delta_x)
    bv = _as_vec3(beta_vec)
    b2 = float(bv @ bv)
    if b2 >= 1.0:
        raise DomainError(f"|beta_vec| must be < 1, got {math.sqrt(b2)}")
    gamma = 1.0 / math.sqrt(1.0 - b2)
    return gamma * (float(delta_ct) - float(bv @ dx))


def pf_beta_vector(pf: PreferredFrameSpec, t: float, T: float = SIDEREAL_DAY_S) -> np.ndarray:
    """Preferred-frame velocity (units of c) at sidereal time t."""
    if T <= 0:
        raise ConfigError("T must be > 0")
    phase = 2.0 * math.pi * (t - pf.t0) / T
    s = math.sin(pf.chi)
    return pf.beta * np.array([s * math.cos(phase), s * math.sin(phase), math.cos(pf.chi)])


def theta_of_t(pf: PreferredFrameSpec, t: float, T: float = SIDEREAL_DAY_S) -> float:
    """Angle between the frame velocity and the West-East x-axis at time t.

    Oscillates between pi/2 - chi' and pi/2 + chi' (chi' = min(chi, pi - chi))
    over one sidereal period; crosses pi/2 when the velocity is orthogonal to
    the detector axis.
    """
    if T <= 0:
        raise ConfigError("T must be > 0")
    phase = 2.0 * math.pi * (t - pf.t0) / T
    arg = math.sin(pf.chi) * math.cos(phase)
    return math.acos(max(-1.0, min(1.0, arg)))


def beta_dot_dx(pf: PreferredFrameSpec, geom: ExperimentGeometry, t: float) -> float:
    """Projection beta_vec . delta_x for the West-East detector axis (m).

    Equals beta * d_ab * sin(chi) * cos(2 pi (t - t0) / T): extremal at t0 and
    t0 + T/2, zero at the orthogonality times t0 + T/4 and t0 + 3T/4.
    """
    phase = 2.0 * math.pi * (t - pf.t0) / geom.sidereal_period
    return pf.beta * geom.d_ab * math.sin(pf.chi) * math.cos(phase)


def pf_separation(delta_ct: float, delta_ct_prime: float, d_ab: float) -> float:
    """Spatial separation of the two events in the boosted frame.

    From interval invariance: d'_ab = sqrt(d_ab^2 - dct^2 + dct'^2).
    """
    radicand = d_ab**2 - delta_ct**2 + delta_ct_prime**2
    if radicand < 0:
        raise DomainError(
            f"unphysical input combination: d_ab^2 - dct^2 + dct'^2 = {radicand} < 0"
        )
    return math.sqrt(radicand)


def communication_feasible(beta_t: float, delta_ct_prime: float, d_prime_ab: float) -> bool:
    """Whether a tachyon of reduced speed beta_t can connect the two events.

    True iff beta_t * |dct'| >= d'_ab.  Infinite beta_t is always feasible,
    including the exactly-simultaneous case dct' = 0.
    """
    if d_prime_ab < 0:
        raise ConfigError("d_prime_ab must be >= 0")
    if math.isinf(beta_t):
        return True
    return beta_t * abs(delta_ct_prime) >= d_prime_ab
