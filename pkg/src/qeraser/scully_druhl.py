"""Scully-Druhl-type eraser: which-way records held by two separated emitters.

A driving pulse is split symmetrically onto emitters at ``x`` (path 1) and
``y`` (path 2). Whichever one fires leaves its record state behind, so the
signal photon ends up entangled with ``|B_x, A_y>`` (path 1) or
``|A_x, B_y>`` (path 2). Everything observable on the signal side depends only
on the record overlap ``<A_x,B_y|B_x,A_y> = mu_s e^{i delta}``; that overlap is
the only environment data carried around here.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .epr import Conditionals, JointConfig, JointDistribution
from .qstate import TOL, ValidationError, check_normalized, orthogonal_complement


@dataclass(frozen=True)
class SourceOverlap:
    """Record overlap in polar form ``mu_s * e^{i delta}``."""

    mu_s: float
    delta: float = 0.0

    def __post_init__(self):
        mu, delta = float(self.mu_s), float(self.delta)
        if not (math.isfinite(mu) and math.isfinite(delta)):
            raise ValidationError("overlap must be finite")
        if not (0.0 <= mu <= 1.0):
            raise ValidationError(f"mu_s={mu!r} is outside [0, 1]")
        object.__setattr__(self, "mu_s", mu)
        object.__setattr__(self, "delta", delta)

    @classmethod
    def from_complex(cls, z: complex) -> "SourceOverlap":
        mu = abs(z)
        if mu > 1.0 and mu - 1.0 <= TOL:
            mu = 1.0
        return cls(mu, cmath.phase(z) if mu > 0.0 else 0.0)

    @property
    def value(self) -> complex:
        return self.mu_s * cmath.exp(1j * self.delta)


SOURCE_KINDS = ("identical", "orthogonal", "ideal-idler", "spacs", "custom")


@dataclass(frozen=True)
class SourceModel:
    """How the emitters record which-way information.

    identical
        Emitters return to their initial state; nothing is recorded.
    orthogonal
        Emitters end in a state orthogonal to the initial one.
    ideal-idler
        The record is handed to a second photon on path x / path y, with no
        other footprint. Use :func:`nonoptimal_conditionals` to add one.
    spacs
        Seeded down-conversion: coherent states ``alpha1``, ``alpha2`` gain one
        photon (single-photon-added coherent states).
    custom
        An explicit overlap.
    """

    kind: str
    alpha1: complex = 0j
    alpha2: complex = 0j
    overlap: Optional[SourceOverlap] = field(default=None)

    def __post_init__(self):
        if self.kind not in SOURCE_KINDS:
            raise ValidationError(f"unknown source kind {self.kind!r}; expected one of {SOURCE_KINDS}")
        if self.kind == "custom" and self.overlap is None:
            raise ValidationError("custom source needs an overlap")
        object.__setattr__(self, "alpha1", complex(self.alpha1))
        object.__setattr__(self, "alpha2", complex(self.alpha2))

    @classmethod
    def identical(cls) -> "SourceModel":
        return cls("identical")

    @classmethod
    def orthogonal(cls) -> "SourceModel":
        return cls("orthogonal")

    @classmethod
    def ideal_idler(cls) -> "SourceModel":
        return cls("ideal-idler")

    @classmethod
    def spacs(cls, alpha1: complex, alpha2: complex) -> "SourceModel":
        return cls("spacs", alpha1=alpha1, alpha2=alpha2)

    @classmethod
    def custom(cls, overlap: SourceOverlap) -> "SourceModel":
        return cls("custom", overlap=overlap)


def spacs_overlap(alpha1: complex, alpha2: complex) -> complex:
    """``<a1|a1,1> <a2,1|a2>`` for single-photon-added coherent states.

    ``<a|a^dag|a> = conj(a)``, so the overlap is
    ``conj(a1) a2 / sqrt((1 + |a1|^2)(1 + |a2|^2))``.
    """
    a1, a2 = complex(alpha1), complex(alpha2)
    return a1.conjugate() * a2 / math.sqrt((1.0 + abs(a1) ** 2) * (1.0 + abs(a2) ** 2))


def purity(model: SourceModel) -> SourceOverlap:
    """The record overlap induced by a source model."""
    if model.kind == "identical":
        return SourceOverlap(1.0, 0.0)
    if model.kind in ("orthogonal", "ideal-idler"):
        return SourceOverlap(0.0, 0.0)
    if model.kind == "spacs":
        return SourceOverlap.from_complex(spacs_overlap(model.alpha1, model.alpha2))
    return model.overlap


def source_density(overlap: SourceOverlap) -> np.ndarray:
    """Reduced density matrix of the signal photon over (path 1, path 2)."""
    z = overlap.value
    return 0.5 * np.array([[1.0, z], [z.conjugate(), 1.0]])


def purity_from_density(rho: np.ndarray) -> float:
    """``sqrt(2 Tr(rho^2) - 1)``, the two-level purity measure in [0, 1]."""
    rho = np.asarray(rho, dtype=complex)
    tr2 = float(np.real(np.trace(rho @ rho)))
    return math.sqrt(max(2.0 * tr2 - 1.0, 0.0))


def distinguishability(overlap: SourceOverlap) -> float:
    """Which-way distinguishability ``2 P_succ - 1``.

    With optimal unambiguous discrimination the records are told apart with
    probability ``P_conc = 1 - mu_s``; on an inconclusive result one guesses
    (success 1/2), so ``P_succ = (1 - P_conc)/2 + P_conc``.
    """
    p_conc = 1.0 - overlap.mu_s
    p_succ = 0.5 * (1.0 - p_conc) + p_conc
    return 2.0 * p_succ - 1.0


def visibility(overlap: SourceOverlap, theta1: float) -> float:
    return overlap.mu_s * abs(math.sin(theta1))


def ensemble_probabilities(overlap: SourceOverlap, theta1: float, phi1: float) -> tuple[float, float]:
    """``P(D+-) = (1 +- mu_s sin(theta1) cos(phi1 + delta)) / 2`` over the whole ensemble."""
    x = overlap.mu_s * math.sin(theta1) * math.cos(phi1 + overlap.delta)
    return (1.0 + x) / 2.0, (1.0 - x) / 2.0


def duality_check(overlap: SourceOverlap, theta1: float) -> tuple[float, float, float]:
    """``(D^2, V^2, D^2 + V^2)``; the sum never exceeds 1."""
    d2 = distinguishability(overlap) ** 2
    v2 = visibility(overlap, theta1) ** 2
    return d2, v2, d2 + v2


@dataclass(frozen=True)
class DiscriminationPOVM:
    """Unambiguous discrimination of two records ``psi1``, ``psi2``.

    ``f1`` fires only for ``psi1`` and ``f2`` only for ``psi2``; ``f_inconclusive``
    is the remainder. Identical inputs give ``f1 = f2 = 0``.
    """

    psi1: np.ndarray
    psi2: np.ndarray
    f1: np.ndarray
    f2: np.ndarray
    f_inconclusive: np.ndarray

    @property
    def p_conclusive(self) -> float:
        """Success probability for either (equally likely) input."""
        return 1.0 - abs(np.vdot(self.psi1, self.psi2))

    def elements(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.f1, self.f2, self.f_inconclusive


def uqsd_build(psi1: np.ndarray, psi2: np.ndarray) -> DiscriminationPOVM:
    psi1 = np.asarray(psi1, dtype=complex)
    psi2 = np.asarray(psi2, dtype=complex)
    for v in (psi1, psi2):
        if v.shape != (2,):
            raise ValidationError("records must be two-component states")
        check_normalized(v)
    s = abs(np.vdot(psi1, psi2))
    if s >= 1.0 - TOL:
        zero = np.zeros((2, 2), dtype=complex)
        return DiscriminationPOVM(psi1, psi2, zero, zero.copy(), np.eye(2, dtype=complex))
    perp1 = orthogonal_complement(psi1)
    perp2 = orthogonal_complement(psi2)
    f1 = np.outer(perp2, perp2.conj()) / (1.0 + s)
    f2 = np.outer(perp1, perp1.conj()) / (1.0 + s)
    return DiscriminationPOVM(psi1, psi2, f1, f2, np.eye(2) - f1 - f2)


def uqsd_outcome_distribution(povm: DiscriminationPOVM, prepared) -> tuple[float, float, float]:
    """``(p_1, p_2, p_?)`` for a prepared record.

    ``prepared`` is ``1``, ``2`` (one of the POVM's own records) or an explicit
    normalized state.
    """
    if isinstance(prepared, (int, np.integer)) and not isinstance(prepared, bool):
        if prepared not in (1, 2):
            raise ValidationError("prepared must be 1, 2 or a state")
        state = povm.psi1 if prepared == 1 else povm.psi2
    else:
        state = np.asarray(prepared, dtype=complex)
        check_normalized(state)
    probs = [float(np.real(np.vdot(state, f @ state))) for f in povm.elements()]
    return tuple(min(max(p, 0.0), 1.0) for p in probs)


def record_states(overlap: SourceOverlap) -> tuple[np.ndarray, np.ndarray]:
    """Two-component stand-ins for ``psi1 = |B_x,A_y>`` and ``psi2 = |A_x,B_y>``.

    Chosen so that ``<psi2|psi1> = mu_s e^{i delta}``.
    """
    psi2 = np.array([1.0, 0.0], dtype=complex)
    psi1 = np.array([overlap.value, math.sqrt(max(1.0 - overlap.mu_s**2, 0.0))], dtype=complex)
    return psi1, psi2


def which_way_povm(overlap: SourceOverlap) -> DiscriminationPOVM:
    psi1, psi2 = record_states(overlap)
    return uqsd_build(psi1, psi2)


def _half_angles(jc: JointConfig):
    t1, t2 = jc.alice.theta, jc.bob.theta
    return math.cos(t1 / 2) ** 2, math.sin(t1 / 2) ** 2, math.cos(t2 / 2) ** 2, math.sin(t2 / 2) ** 2


def nonoptimal_conditionals(overlap: SourceOverlap, jc: JointConfig) -> Conditionals:
    """Subensemble probabilities when the emission also marks an environment.

    The pair state is ``(|+>_s|->_i|m> - |->_s|+>_i|n>) / sqrt(2)`` with
    ``<m|n> = mu_s e^{i delta}``; the recovered fringe is scaled by ``mu_s``.
    """
    c1, s1, c2, s2 = _half_angles(jc)
    fringe = (
        0.5
        * overlap.mu_s
        * math.sin(jc.alice.theta)
        * math.sin(jc.bob.theta)
        * math.cos(jc.alice.phi - jc.bob.phi - overlap.delta)
    )
    pp = c1 * s2 + s1 * c2 - fringe
    mp = s1 * s2 + c1 * c2 + fringe
    pm = c1 * c2 + s1 * s2 + fringe
    mm = s1 * c2 + c1 * s2 - fringe
    return Conditionals((pp, mp), (pm, mm))


def optimal_conditionals(jc: JointConfig) -> Conditionals:
    """Ideal-idler eraser: no footprint beyond the idler photon itself."""
    return nonoptimal_conditionals(SourceOverlap(1.0, 0.0), jc)


def joint_distribution(overlap: SourceOverlap, jc: JointConfig) -> JointDistribution:
    """Joint detector statistics; each idler outcome has probability 1/2."""
    cond = nonoptimal_conditionals(overlap, jc)
    (pp, mp), (pm, mm) = cond.given_plus, cond.given_minus
    cells = np.clip(0.5 * np.array([pp, pm, mp, mm]), 0.0, None)
    return JointDistribution.from_array(cells / cells.sum())


def subensemble_visibility(overlap: SourceOverlap, theta1: float, theta2: float, idler: str = "+") -> float:
    """Contrast of ``P(D+|D'idler)`` as ``phi1`` sweeps a period."""
    c1, s1 = math.cos(theta1 / 2) ** 2, math.sin(theta1 / 2) ** 2
    c2, s2 = math.cos(theta2 / 2) ** 2, math.sin(theta2 / 2) ** 2
    mean = c1 * s2 + s1 * c2 if idler == "+" else c1 * c2 + s1 * s2
    amp = 0.5 * overlap.mu_s * abs(math.sin(theta1) * math.sin(theta2))
    return amp / mean if mean > TOL else 0.0

