"""One-channel BCHSH statistic per sidereal-time bin.

M = [N(a,b) - N(a,b') + N(a',b) + N(a',b') - N(a',inf) - N(inf,b)] / N(inf,inf)

Local models satisfy -1 <= M <= 0; quantum mechanics reaches (sqrt(2)-1)/2 at
the optimal settings.  Counts from the seven passes are treated as independent
Poisson variables, so the standard error combines the six numerator counts and
the normalization count in quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .errors import ConfigError
from .simulation import CoincidenceTable

_NUMERATOR_SIGNS = {
    "ab": 1,
    "ab'": -1,
    "a'b": 1,
    "a'b'": 1,
    "a'inf": -1,
    "infb": -1,
}


@dataclass(frozen=True)
class MEstimate:
    bin_center: float
    m: float
    sigma_m: float
    n_norm: int

    def __post_init__(self):
        if self.sigma_m < 0:
            raise ConfigError("sigma_m must be >= 0")
        if self.n_norm <= 0:
            raise ConfigError("n_norm must be > 0")


class Verdict(Enum):
    CONSISTENT = "consistent"
    VIOLATES_UPPER = "violates_upper"
    VIOLATES_LOWER = "violates_lower"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class AnomalyWindow:
    """A contiguous run of bins whose statistic is not above the local bound."""

    center: float
    start: float
    end: float
    n_bins: int


@dataclass(frozen=True)
class WindowScanResult:
    verdicts: tuple[tuple[float, Verdict], ...]
    windows: tuple[AnomalyWindow, ...]

    @property
    def anomaly_times(self) -> tuple[float, ...]:
        return tuple(w.center for w in self.windows)


def m_statistic(table: CoincidenceTable) -> MEstimate:
    """BCHSH M with Poisson standard error for one bin."""
    n_norm = table.counts["infinf"]
    if n_norm <= 0:
        raise ConfigError(f"normalization count N(inf,inf) is zero in bin {table.bin_center:g}")
    numerator = sum(sign * table.counts[label] for label, sign in _NUMERATOR_SIGNS.items())
    m = numerator / n_norm
    variance = sum(table.counts[label] for label in _NUMERATOR_SIGNS) + m * m * n_norm
    sigma = math.sqrt(variance) / n_norm
    return MEstimate(bin_center=table.bin_center, m=m, sigma_m=sigma, n_norm=n_norm)


def inequality_verdict(e: MEstimate, n_sigma: float = 3.0) -> Verdict:
    """Classify one estimate against -1 <= M <= 0 at n_sigma confidence."""
    lo = e.m - n_sigma * e.sigma_m
    hi = e.m + n_sigma * e.sigma_m
    if lo > 0.0:
        return Verdict.VIOLATES_UPPER
    if hi < -1.0:
        return Verdict.VIOLATES_LOWER
    if lo >= -1.0 and hi <= 0.0:
        return Verdict.CONSISTENT
    return Verdict.INCONCLUSIVE


def window_scan(
    series: Sequence[MEstimate], T: float, n_sigma: float = 3.0
) -> WindowScanResult:
    """Locate contiguous runs of bins that do not violate the upper bound.

    Under a sub-bound tachyon model these anomaly windows should straddle the
    orthogonality times t0 + T/4 and t0 + 3T/4.
    """
    ordered = sorted(series, key=lambda e: e.bin_center)
    verdicts = tuple((e.bin_center, inequality_verdict(e, n_sigma)) for e in ordered)
    windows: list[AnomalyWindow] = []
    run: list[float] = []

    def close_run():
        if run:
            windows.append(
                AnomalyWindow(
                    center=sum(run) / len(run),
                    start=run[0],
                    end=run[-1],
                    n_bins=len(run),
                )
            )
            run.clear()

    for center, verdict in verdicts:
        if verdict is not Verdict.VIOLATES_UPPER:
            run.append(center)
        else:
            close_run()
    close_run()
    return WindowScanResult(verdicts=verdicts, windows=tuple(windows))


def analyze_tables(
    tables: Iterable[CoincidenceTable], n_sigma: float = 3.0
) -> list[MEstimate]:
    return [m_statistic(t) for t in sorted(tables, key=lambda t: t.bin_center)]


def series_to_csv(series: Sequence[MEstimate], n_sigma: float = 3.0) -> str:
    """CSV ``bin_center_s,M,sigma_M,verdict`` with 17 significant digits."""
    lines = ["bin_center_s,M,sigma_M,verdict"]
    for e in series:
        verdict = inequality_verdict(e, n_sigma)
        lines.append(f"{e.bin_center:.17g},{e.m:.17g},{e.sigma_m:.17g},{verdict.value}")
    return "\n".join(lines) + "\n"
