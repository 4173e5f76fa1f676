"""Detectable tachyon-velocity lower bound and related experiment-design checks.

The central quantity is the closed-form lower bound

    beta_t_min = sqrt(1 + (1 - beta^2)(1 - rho_bar^2)
                          / (rho_bar + beta sin(chi) sin(pi dt / T))^2)

below which a finite-speed preferred-frame tachyon would produce observable
deviations from quantum correlations.  ``brute_force_bound`` re-derives the
same number by numerically minimizing the boosted separation-to-delay ratio
over the experimentally reachable constraint box, and serves as an
independent cross-check of the closed form.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np
from scipy import optimize

from .errors import ConfigError
from .relativity import SIDEREAL_DAY_S

#: Group-index temperature coefficient of air at 810 nm (1/K).
AIR_GROUP_INDEX_DT = 9.47e-7


@dataclass(frozen=True)
class BoundInputs:
    """Parameters entering the lower-bound formula."""

    rho_bar: float
    delta_t_acq: float
    sidereal_period: float = SIDEREAL_DAY_S
    beta: float = 0.0
    chi: float = math.pi / 2

    def __post_init__(self):
        if not 0.0 < self.rho_bar < 1.0:
            raise ConfigError(f"rho_bar must be in (0, 1), got {self.rho_bar}")
        if not 0.0 <= self.beta < 1.0:
            raise ConfigError(f"beta must be in [0, 1), got {self.beta}")
        if not 0.0 < self.delta_t_acq < self.sidereal_period:
            raise ConfigError(
                f"delta_t_acq must be in (0, T), got {self.delta_t_acq} with T={self.sidereal_period}"
            )
        if not 0.0 <= self.chi <= math.pi:
            raise ConfigError(f"chi must be in [0, pi], got {self.chi}")


@dataclass(frozen=True)
class BoundCurve:
    """A sweep of the lower bound versus preferred-frame speed."""

    rho_bar: float
    delta_t_acq: float
    sidereal_period: float
    chi: float
    points: tuple[tuple[float, float], ...]
    label: str = ""

    def __post_init__(self):
        betas = [p[0] for p in self.points]
        if any(b2 <= b1 for b1, b2 in zip(betas, betas[1:])):
            raise ConfigError("curve points must be strictly increasing in beta")
        if any(p[1] < 1.0 for p in self.points):
            raise ConfigError("all beta_t_min values must be >= 1")


@dataclass(frozen=True)
class DriftBudget:
    """Thermal optical-path drift: coefficient, initial length, temperature step."""

    l0: float
    delta_T: float
    dn_dT: float = AIR_GROUP_INDEX_DT

    def __post_init__(self):
        if self.l0 < 0:
            raise ConfigError("l0 must be >= 0")


def _window_halfwidth(inputs: BoundInputs) -> float:
    """Reachable extremum of beta.dx / d_ab given the acquisition window."""
    return inputs.beta * math.sin(inputs.chi) * math.sin(
        math.pi * inputs.delta_t_acq / inputs.sidereal_period
    )


def beta_t_min(inputs: BoundInputs) -> float:
    """Closed-form detectable-velocity lower bound (dimensionless, >= 1)."""
    rho = inputs.rho_bar
    s = _window_halfwidth(inputs)
    num = (1.0 - inputs.beta**2) * (1.0 - rho**2)
    return math.sqrt(1.0 + num / (rho + s) ** 2)


def brute_force_bound(inputs: BoundInputs, grid_n: int = 10_000) -> float:
    """Numerically minimize the boosted separation-to-delay ratio.

    Works on normalized variables u = dct / d_ab in [-rho_bar, rho_bar] and
    w = beta.dx / d_ab in [-s, s], minimizing

        f(u, w) = 1 + (1 - beta^2)(1 - u^2) / (u - w)^2

    by coarse grid scan plus bounded local refinement of the interior and of
    each box edge (the minimizer sits at a box corner, so edges are refined
    explicitly).  ``grid_n`` is the total number of coarse grid points.
    Independent of :func:`beta_t_min`; used as its oracle.
    """
    if grid_n < 100:
        raise ConfigError("grid_n must be >= 100")
    rho = inputs.rho_bar
    s = _window_halfwidth(inputs)
    one_minus_b2 = 1.0 - inputs.beta**2

    def f(u: float, w: float) -> float:
        denom = (u - w) ** 2
        if denom == 0.0:
            return math.inf
        return 1.0 + one_minus_b2 * (1.0 - u * u) / denom

    n_side = max(10, int(math.isqrt(grid_n)))
    us = np.linspace(-rho, rho, n_side)
    ws = np.linspace(-s, s, n_side) if s > 0 else np.array([0.0])
    uu, ww = np.meshgrid(us, ws, indexing="ij")
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = 1.0 + one_minus_b2 * (1.0 - uu**2) / (uu - ww) ** 2
    vals = np.where(np.isfinite(vals), vals, np.inf)
    i, j = np.unravel_index(np.argmin(vals), vals.shape)
    best = float(vals[i, j])

    # Interior refinement from the best coarse point.
    res = optimize.minimize(
        lambda p: f(p[0], p[1]),
        x0=[float(uu[i, j]), float(ww[i, j])],
        bounds=[(-rho, rho), (-s, s) if s > 0 else (0.0, 0.0)],
        method="L-BFGS-B",
    )
    if res.fun < best:
        best = float(res.fun)

    # Edge refinement: each boundary of the box as a 1-D bounded problem.
    edges_1d = [lambda u, wfix=wf: f(u, wfix) for wf in (-s, s)]
    for g in edges_1d:
        r = optimize.minimize_scalar(g, bounds=(-rho, rho), method="bounded",
                                     options={"xatol": 1e-15})
        if r.fun < best:
            best = float(r.fun)
    if s > 0:
        for ufix in (-rho, rho):
            r = optimize.minimize_scalar(lambda w: f(ufix, w), bounds=(-s, s),
                                         method="bounded", options={"xatol": 1e-18})
            if r.fun < best:
                best = float(r.fun)
    # Corners.
    for ufix in (-rho, rho):
        for wfix in (-s, s):
            v = f(ufix, wfix)
            if v < best:
                best = v
    return math.sqrt(best)


def acquisition_condition(inputs: BoundInputs, threshold: float = 0.1) -> tuple[float, bool]:
    """Check dt << rho_bar T / pi.

    Returns (ratio, satisfied) with ratio = pi dt / (rho_bar T); satisfied iff
    ratio < threshold (strict).
    """
    ratio = math.pi * inputs.delta_t_acq / (inputs.rho_bar * inputs.sidereal_period)
    return ratio, ratio < threshold


def crossover_beta(inputs: BoundInputs) -> float:
    """Frame speed beta_0 = rho_bar T / (pi dt) where the bound starts to drop.

    Clipped to 1 since a frame speed cannot reach c.
    """
    beta0 = inputs.rho_bar * inputs.sidereal_period / (math.pi * inputs.delta_t_acq)
    return min(beta0, 1.0)


def sensitivity_min_chi(gamma_align: float) -> float:
    """Minimum polar angle chi observable given detector-axis misalignment.

    The detector axis becomes orthogonal to the frame velocity during a
    sidereal day only if chi >= gamma_align; smaller chi lies in the blind
    cone around the polar axis.
    """
    if not 0.0 <= gamma_align <= math.pi / 2:
        raise ConfigError("gamma_align must be in [0, pi/2]")
    return gamma_align


def sweep_bound_curve(inputs: BoundInputs, beta_grid: Sequence[float], label: str = "") -> BoundCurve:
    """Evaluate the closed-form bound on an increasing grid of frame speeds."""
    betas = [float(b) for b in beta_grid]
    if not betas:
        raise ConfigError("beta grid must be non-empty")
    if any(b2 <= b1 for b1, b2 in zip(betas, betas[1:])):
        raise ConfigError("beta grid must be strictly increasing")
    if betas[0] < 0.0 or betas[-1] >= 1.0:
        raise ConfigError("beta grid values must be in [0, 1)")
    points = tuple(
        (b, beta_t_min(replace(inputs, beta=b))) for b in betas
    )
    return BoundCurve(
        rho_bar=inputs.rho_bar,
        delta_t_acq=inputs.delta_t_acq,
        sidereal_period=inputs.sidereal_period,
        chi=inputs.chi,
        points=points,
        label=label,
    )


def drift_length(b: DriftBudget) -> float:
    """Optical-path drift (m) from a mean temperature difference."""
    return b.dn_dT * b.l0 * b.delta_T


def drift_exceeds_budget(b: DriftBudget, delta_d: float) -> bool:
    """True iff the thermal drift exceeds the path-equalization budget (strict)."""
    if delta_d <= 0:
        raise ConfigError("delta_d must be > 0")
    return drift_length(b) > delta_d


def curve_to_csv(curve: BoundCurve) -> str:
    """Serialize a curve as CSV: header ``beta,beta_t_min``, 17 significant digits."""
    lines = ["beta,beta_t_min"]
    for beta, bound in curve.points:
        lines.append(f"{beta:.17g},{bound:.17g}")
    return "\n".join(lines) + "\n"


def curve_to_json(curve: BoundCurve) -> str:
    """Serialize a curve with its full inputs echoed for provenance."""
    doc = {
        "label": curve.label,
        "inputs": {
            "rho_bar": curve.rho_bar,
            "delta_t_acq": curve.delta_t_acq,
            "sidereal_period": curve.sidereal_period,
            "chi": curve.chi,
        },
        "points": [[beta, bound] for beta, bound in curve.points],
    }
    return json.dumps(doc, indent=2) + "\n"
