"""Monte Carlo coincidence experiment over a sidereal day.

One run makes seven passes, one per polarizer-setting combination of the
one-channel BCHSH statistic, all sharing the same sidereal phase.  Within each
sidereal-time bin the pair count is Poisson, communication feasibility is
evaluated once at the bin center, and outcomes are drawn from the quantum or
fallback joint distribution accordingly.

Determinism contract: every (pass, bin) owns a counter-based Philox stream
keyed by the master seed, so the result is bitwise independent of how bins
are partitioned across workers.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .correlations import (
    REMOVED,
    EntangledState,
    FallbackKind,
    PolarizerSetting,
    TachyonModel,
    effective_joint,
)
from .errors import ConfigError, DataFormatError
from .relativity import (
    ExperimentGeometry,
    PreferredFrameSpec,
    boost_delta_ct,
    communication_feasible,
    pf_beta_vector,
    pf_separation,
)

#: Setting combinations of the BCHSH statistic, in measurement-pass order.
COMBO_LABELS = ("ab", "ab'", "a'b", "a'b'", "a'inf", "infb", "infinf")

_COMBO_SIDES = {
    "ab": ("a", "b"),
    "ab'": ("a", "b_prime"),
    "a'b": ("a_prime", "b"),
    "a'b'": ("a_prime", "b_prime"),
    "a'inf": ("a_prime", None),
    "infb": (None, "b"),
    "infinf": (None, None),
}


@dataclass(frozen=True)
class BellSettings:
    """The four polarizer orientations a, a', b, b' (radians from vertical)."""

    a: float = 0.0
    a_prime: float = math.pi / 4
    b: float = math.pi / 8
    b_prime: float = 3 * math.pi / 8

    def __post_init__(self):
        angles = (self.a, self.a_prime, self.b, self.b_prime)
        if any(not 0.0 <= x < math.pi for x in angles):
            raise ConfigError("setting angles must be in [0, pi)")
        if len(set(angles)) != 4:
            raise ConfigError("the four setting angles must be distinct")

    def side(self, name: str | None) -> PolarizerSetting:
        if name is None:
            return REMOVED
        return PolarizerSetting(getattr(self, name))


@dataclass(frozen=True)
class SimulationConfig:
    """Full description of one simulated coincidence experiment."""

    geometry: ExperimentGeometry
    pf: PreferredFrameSpec
    tachyon: TachyonModel
    state: EntangledState = field(default_factory=EntangledState)
    settings: BellSettings = field(default_factory=BellSettings)
    pairs_per_second: float = 1e5
    bin_width: float | None = None
    path_mismatch: float | None = None
    seed: int = 0
    duration: float | None = None

    def __post_init__(self):
        if self.bin_width is None:
            object.__setattr__(self, "bin_width", self.geometry.delta_t_acq)
        if self.path_mismatch is None:
            # Worst case: the unknown residual equals the full equalization budget.
            object.__setattr__(self, "path_mismatch", self.geometry.delta_d)
        if self.duration is None:
            object.__setattr__(self, "duration", self.geometry.sidereal_period)
        if abs(self.path_mismatch) > self.geometry.delta_d:
            raise ConfigError("|path_mismatch| must be <= delta_d")
        if self.pairs_per_second <= 0:
            raise ConfigError("pairs_per_second must be > 0")
        if self.bin_width < self.geometry.delta_t_acq:
            raise ConfigError("bin_width must be >= delta_t_acq")
        if self.duration <= 0:
            raise ConfigError("duration must be > 0")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class CoincidenceTable:
    """Coincidence counts for the seven setting combinations in one bin."""

    bin_center: float
    counts: dict[str, int]

    def __post_init__(self):
        if set(self.counts) != set(COMBO_LABELS):
            missing = set(COMBO_LABELS) - set(self.counts)
            raise ConfigError(f"missing combinations: {sorted(missing)}")
        if any(c < 0 for c in self.counts.values()):
            raise ConfigError("counts must be non-negative")


@dataclass(frozen=True)
class SimulationResult:
    config: SimulationConfig
    tables: tuple[CoincidenceTable, ...]
    pairs_drawn: dict[str, int]
    dropped_seconds: float


def feasibility_at(config: SimulationConfig, t: float) -> bool:
    """Whether a tachyon can connect the two measurement events at time t."""
    geom = config.geometry
    delta_x = np.array([geom.d_ab, 0.0, 0.0])
    beta_vec = pf_beta_vector(config.pf, t, geom.sidereal_period)
    dct = config.path_mismatch
    dct_prime = boost_delta_ct(dct, delta_x, beta_vec)
    d_prime = pf_separation(dct, dct_prime, geom.d_ab)
    return communication_feasible(config.tachyon.beta_t, dct_prime, d_prime)


def _bin_generator(seed: int, pass_index: int, bin_index: int) -> np.random.Generator:
    key = np.array([seed, (pass_index << 32) | bin_index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _simulate_bin(
    config: SimulationConfig,
    pass_index: int,
    bin_index: int,
    feasible: bool,
) -> tuple[int, int]:
    """Draw (pairs, coincidences) for one pass/bin from its private stream."""
    label = COMBO_LABELS[pass_index]
    side_a, side_b = _COMBO_SIDES[label]
    a = config.settings.side(side_a)
    b = config.settings.side(side_b)
    gen = _bin_generator(config.seed, pass_index, bin_index)
    n = int(gen.poisson(config.pairs_per_second * config.bin_width))
    if n == 0:
        return 0, 0
    if feasible or config.tachyon.fallback is FallbackKind.UNCORRELATED:
        dist = effective_joint(config.tachyon, config.state, feasible, None, a, b)
        return n, int(gen.binomial(n, dist.p_pp))
    # Infeasible with the deterministic LHV fallback: shared hidden angle per pair.
    lam = gen.uniform(0.0, math.pi, size=n)
    pass_both = np.ones(n, dtype=bool)
    for setting in (a, b):
        if not setting.removed:
            d = np.abs(lam - setting.angle) % math.pi
            pass_both &= np.minimum(d, math.pi - d) < math.pi / 4
    return n, int(np.count_nonzero(pass_both))


def default_workers() -> int:
    """Worker cap from TBL_THREADS; defaults to 1 (results never depend on it)."""
    raw = os.environ.get("TBL_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"TBL_THREADS must be an integer, got {raw!r}")
    return max(1, n)


def run_simulation(config: SimulationConfig, workers: int | None = None) -> SimulationResult:
    """Simulate the seven measurement passes and merge per-bin tables.

    A final partial bin (duration not divisible by bin_width) is dropped; the
    dropped span is reported in the result.  Fixed seed implies bitwise
    identical output for any worker count.
    """
    if workers is None:
        workers = default_workers()
    n_bins = int(config.duration // config.bin_width)
    if n_bins == 0:
        raise ConfigError("duration shorter than one bin")
    dropped = config.duration - n_bins * config.bin_width
    centers = [(i + 0.5) * config.bin_width for i in range(n_bins)]
    feasible = [feasibility_at(config, t) for t in centers]

    tasks = [(p, i) for p in range(len(COMBO_LABELS)) for i in range(n_bins)]

    def work(task):
        p, i = task
        return _simulate_bin(config, p, i, feasible[i])

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(work, tasks))
    else:
        results = [work(t) for t in tasks]

    counts = {label: [0] * n_bins for label in COMBO_LABELS}
    pairs_drawn = {label: 0 for label in COMBO_LABELS}
    for (p, i), (n, c) in zip(tasks, results):
        label = COMBO_LABELS[p]
        counts[label][i] = c
        pairs_drawn[label] += n

    tables = tuple(
        CoincidenceTable(
            bin_center=centers[i],
            counts={label: counts[label][i] for label in COMBO_LABELS},
        )
        for i in range(n_bins)
    )
    return SimulationResult(
        config=config, tables=tables, pairs_drawn=pairs_drawn, dropped_seconds=dropped
    )


def result_to_csv(result: SimulationResult) -> str:
    """Long-format CSV: ``bin_center_s,combo,count``, one row per bin and combo."""
    lines = ["bin_center_s,combo,count"]
    for table in result.tables:
        for label in COMBO_LABELS:
            lines.append(f"{table.bin_center:.17g},{label},{table.counts[label]}")
    return "\n".join(lines) + "\n"


def tables_from_csv(text: str) -> tuple[CoincidenceTable, ...]:
    """Parse the long-format coincidence CSV back into per-bin tables."""
    lines = text.splitlines()
    if not lines or lines[0].strip() != "bin_center_s,combo,count":
        raise DataFormatError("expected header 'bin_center_s,combo,count'", line=1)
    by_bin: dict[float, dict[str, int]] = {}
    order: list[float] = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 3:
            raise DataFormatError(f"expected 3 fields, got {len(parts)}", line=lineno)
        try:
            center = float(parts[0])
            count = int(parts[2])
        except ValueError as exc:
            raise DataFormatError(str(exc), line=lineno)
        label = parts[1]
        if label not in COMBO_LABELS:
            raise DataFormatError(f"unknown combination {label!r}", line=lineno)
        if count < 0:
            raise DataFormatError("count must be non-negative", line=lineno)
        if center not in by_bin:
            by_bin[center] = {}
            order.append(center)
        by_bin[center][label] = count
    tables = []
    for center in order:
        counts = by_bin[center]
        if set(counts) != set(COMBO_LABELS):
            missing = sorted(set(COMBO_LABELS) - set(counts))
            raise DataFormatError(f"bin {center:g} is missing combinations {missing}")
        tables.append(CoincidenceTable(bin_center=center, counts=counts))
    return tuple(tables)
