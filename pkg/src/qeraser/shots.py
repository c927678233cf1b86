"""Seeded Monte-Carlo shots drawn from exact detector distributions.

Every shot consumes exactly one uniform variate, taken from a counter-based
Philox stream: shot ``i`` of seed ``s`` always sees the same number no matter
how the run is chunked or parallelized. Outcomes are labelled ``"+"`` / ``"-"``
(``D+``/``D-`` for the signal, ``D'+``/``D'-`` for the idler).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .epr import CELLS, JointDistribution
from .qstate import TOL, ValidationError

CHOICE_TIMES = ("before-signal", "after-signal")
N_BOOTSTRAP = 1000

Distribution = Union[JointDistribution, Sequence[float]]


@dataclass(frozen=True)
class ShotRecord:
    shot_index: int
    signal_outcome: str
    idler_outcome: Optional[str]
    config: object = None
    # narrative only; no estimator reads it
    choice_time_tag: str = "after-signal"


def _check_seed(seed: int) -> int:
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise ValidationError(f"seed must be an integer, got {seed!r}")
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ValidationError(f"seed {seed} is outside the 64-bit range [0, 2^64)")
    return seed


def uniforms(seed: int, start: int, count: int) -> np.ndarray:
    """Uniform variates for shot indices ``start .. start + count - 1``."""
    seed = _check_seed(seed)
    if start < 0 or count < 0:
        raise ValidationError("start and count must be non-negative")
    # Philox4x64 yields four 64-bit words per counter step
    bitgen = np.random.Philox(key=seed, counter=start // 4)
    raw = bitgen.random_raw(count + start % 4)[start % 4 :]
    return (raw >> np.uint64(11)).astype(np.float64) * (1.0 / 2**53)


def _as_cells(dist: Distribution) -> np.ndarray:
    if isinstance(dist, JointDistribution):
        cells = dist.as_array()
    else:
        cells = np.asarray(dist, dtype=float).ravel()
    if cells.shape not in ((2,), (4,)):
        raise ValidationError(f"distribution must have 2 or 4 cells, got {cells.size}")
    if not np.all(np.isfinite(cells)) or np.any(cells < -TOL):
        raise ValidationError(f"distribution has invalid cells {cells.tolist()}")
    if abs(cells.sum() - 1.0) > 1e-9:
        raise ValidationError(f"distribution sums to {cells.sum()!r}, not 1")
    return np.clip(cells, 0.0, None)


def sample_cells(dist: Distribution, n: int, seed: int, start: int = 0) -> np.ndarray:
    """Cell index per shot (0..3 for joint cells ``++, +-, -+, --``; 0..1 for one arm)."""
    cells = _as_cells(dist)
    if n < 1:
        raise ValidationError(f"need at least one shot, got n={n}")
    cdf = np.cumsum(cells)
    cdf[-1] = 1.0
    u = uniforms(seed, start, n)
    return np.searchsorted(cdf, u, side="right").astype(np.int64)


def sample(
    dist: Distribution,
    n: int,
    seed: int,
    *,
    start: int = 0,
    config=None,
    choice_time: str = "after-signal",
) -> list[ShotRecord]:
    """Draw ``n`` shots; identical arguments give identical records."""
    if choice_time not in CHOICE_TIMES:
        raise ValidationError(f"choice_time must be one of {CHOICE_TIMES}")
    idx = sample_cells(dist, n, seed, start)
    joint = _as_cells(dist).size == 4
    records = []
    for k, c in enumerate(idx.tolist()):
        if joint:
            signal, idler = CELLS[c]
        else:
            signal, idler = ("+", "-")[c], None
        records.append(ShotRecord(start + k, signal, idler, config, choice_time))
    return records


@dataclass
class SubensembleCounts:
    """Shot counts ``joint[a, b]`` (signal a, idler b; index 0 is ``+``).

    Single-arm shots land in ``signal_only``. Merging with ``+`` is associative.
    """

    joint: np.ndarray = field(default_factory=lambda: np.zeros((2, 2), dtype=np.int64))
    signal_only: np.ndarray = field(default_factory=lambda: np.zeros(2, dtype=np.int64))

    @property
    def total(self) -> int:
        return int(self.joint.sum() + self.signal_only.sum())

    def __add__(self, other: "SubensembleCounts") -> "SubensembleCounts":
        return SubensembleCounts(self.joint + other.joint, self.signal_only + other.signal_only)

    def cell(self, signal: str, idler: Optional[str]) -> int:
        a = "+-".index(signal)
        if idler is None:
            return int(self.signal_only[a])
        return int(self.joint[a, "+-".index(idler)])

    def subensemble_size(self, idler: str) -> int:
        return int(self.joint[:, "+-".index(idler)].sum())

    def conditional_frequency(self, signal: str = "+", idler: str = "+") -> float:
        size = self.subensemble_size(idler)
        if size == 0:
            raise ValidationError(f"no shots in the D'{idler} subensemble")
        return self.cell(signal, idler) / size

    def frequencies(self) -> np.ndarray:
        """Empirical joint cell frequencies in the order ``++, +-, -+, --``."""
        n = self.joint.sum()
        return self.joint.ravel() / n if n else np.zeros(4)


def accumulate(records: Iterable[ShotRecord]) -> SubensembleCounts:
    counts = SubensembleCounts()
    for r in records:
        a = "+-".index(r.signal_outcome)
        if r.idler_outcome is None:
            counts.signal_only[a] += 1
        else:
            counts.joint[a, "+-".index(r.idler_outcome)] += 1
    return counts


def counts_from_cells(cells: np.ndarray, joint: bool = True) -> SubensembleCounts:
    """Vectorized :func:`accumulate` for the output of :func:`sample_cells`."""
    if joint:
        return SubensembleCounts(joint=np.bincount(cells, minlength=4).reshape(2, 2).astype(np.int64))
    return SubensembleCounts(signal_only=np.bincount(cells, minlength=2).astype(np.int64))


def binomial_sigma(p: float, n: int) -> float:
    return math.sqrt(p * (1.0 - p) / n)


@dataclass(frozen=True)
class Estimate:
    value: float
    stderr: float


def _contrast(f: np.ndarray) -> np.ndarray:
    hi, lo = f.max(axis=-1), f.min(axis=-1)
    s = hi + lo
    return np.where(s > 0, (hi - lo) / np.where(s > 0, s, 1.0), 0.0)


def estimate_visibility(
    phis: Sequence[float],
    counts: Sequence[SubensembleCounts],
    *,
    idler: str = "+",
    signal: str = "+",
    n_boot: int = N_BOOTSTRAP,
    seed: int = 0,
    min_points: int = 8,
    min_shots: int = 1000,
) -> Estimate:
    """Fringe contrast of the conditional frequency ``f(D_signal | D'_idler)`` over ``phis``.

    The standard error comes from a parametric bootstrap: each grid point's
    subensemble is redrawn binomially at its observed frequency.
    """
    phis = np.asarray(phis, dtype=float)
    if len(phis) != len(counts):
        raise ValidationError("need one counts entry per grid point")
    if len(phis) < min_points:
        raise ValidationError(f"need at least {min_points} grid points, got {len(phis)}")
    span = phis.max() - phis.min()
    if span < 2 * math.pi * (len(phis) - 1) / len(phis) - 1e-9:
        raise ValidationError(f"grid spans {span:.4f} rad; a full 2*pi period is required")
    low = [c.total for c in counts if c.total < min_shots]
    if low:
        raise ValidationError(f"every grid point needs at least {min_shots} shots (found {min(low)})")

    sizes = np.array([c.subensemble_size(idler) for c in counts])
    if np.any(sizes == 0):
        raise ValidationError(f"empty D'{idler} subensemble at some grid point")
    hits = np.array([c.cell(signal, idler) for c in counts])
    freq = hits / sizes
    value = float(_contrast(freq))

    rng = np.random.Generator(np.random.Philox(key=_check_seed(seed)))
    boot = rng.binomial(sizes, freq, size=(n_boot, len(freq))) / sizes
    return Estimate(value, float(np.std(_contrast(boot), ddof=1)))


def estimate_correlator(counts: SubensembleCounts) -> Estimate:
    """``E = f(++) + f(--) - f(+-) - f(-+)`` with its binomial standard error."""
    n = int(counts.joint.sum())
    if n == 0:
        raise ValidationError("no joint shots")
    f = counts.frequencies()
    e = f[0] + f[3] - f[1] - f[2]
    return Estimate(float(e), math.sqrt(max(1.0 - e * e, 0.0) / n))


def estimate_chsh(ab, ab_prime, a_prime_b, a_prime_b_prime) -> Estimate:
    """``S = E(a,b) - E(a,b') + E(a',b) + E(a',b')`` from four independent runs."""
    es = [estimate_correlator(c) for c in (ab, ab_prime, a_prime_b, a_prime_b_prime)]
    s = es[0].value - es[1].value + es[2].value + es[3].value
    return Estimate(s, math.sqrt(sum(e.stderr**2 for e in es)))
