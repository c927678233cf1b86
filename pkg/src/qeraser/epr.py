"""Entanglement quantum eraser and its EPR-Bohm twin.

An orthogonally polarized photon pair in the singlet
``(|H>|V> - |V>|H>) / sqrt(2)`` is split between two interferometers. Alice
(signal photon, detectors ``D+``/``D-``) uses ``(theta1, phi1)``, Bob (idler,
``D'+``/``D'-``) uses ``(theta2, phi2)``. Since each interferometer is a
projective measurement along ``n(theta, phi)``, every statistic is that of a
spin singlet measured along ``n1`` and ``n2``:

    P(D+-, D'+-) = (1 -+ (+-) n1 . n2) / 4

There is no time parameter anywhere: the order in which Alice and Bob measure
has no effect on any number computed here.

Correlator sign convention: ``E = P(++) + P(--) - P(+-) - P(-+) = -n1 . n2``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .interferometer import InterferometerConfig, spinor_basis
from .qstate import TOL, ValidationError

SQRT_HALF = math.sqrt(0.5)

SINGLET = np.array([0.0, SQRT_HALF, -SQRT_HALF, 0.0], dtype=complex)
SINGLET.setflags(write=False)

OUTCOMES = ("+", "-")
CELLS = (("+", "+"), ("+", "-"), ("-", "+"), ("-", "-"))
"""Order of joint cells: (signal outcome, idler outcome)."""


def singlet_in_basis(vartheta: float, varphi: float) -> np.ndarray:
    """The singlet written in the spinor basis ``|n(vartheta, varphi), +->``.

    ``-e^{-i varphi} / sqrt(2) * (|n+>|n-> - |n->|n+>)``; the prefactor makes
    the result equal to ``SINGLET`` component by component.
    """
    plus, minus = spinor_basis(vartheta, varphi)
    v = -cmath.exp(-1j * varphi) * SQRT_HALF * (np.kron(plus, minus) - np.kron(minus, plus))
    v.setflags(write=False)
    return v


@dataclass(frozen=True)
class JointConfig:
    alice: InterferometerConfig
    bob: InterferometerConfig

    @classmethod
    def from_angles(cls, theta1: float, phi1: float, theta2: float, phi2: float) -> "JointConfig":
        return cls(InterferometerConfig(theta1, phi1), InterferometerConfig(theta2, phi2))

    @property
    def dot(self) -> float:
        """``n1 . n2`` for the two apparatus directions."""
        return float(np.dot(self.alice.direction, self.bob.direction))


@dataclass(frozen=True)
class Conditionals:
    """Signal-detector probabilities inside each idler subensemble.

    ``given_plus = (P(D+|D'+), P(D-|D'+))`` and likewise ``given_minus``.
    """

    given_plus: tuple[float, float]
    given_minus: tuple[float, float]

    def __getitem__(self, key: tuple[str, str]) -> float:
        signal, idler = key
        pair = self.given_plus if idler == "+" else self.given_minus
        return pair[0] if signal == "+" else pair[1]


@dataclass(frozen=True)
class JointDistribution:
    """``P(D+-, D'+-)`` over the cells ``(++, +-, -+, --)``."""

    pp: float
    pm: float
    mp: float
    mm: float

    def __post_init__(self):
        cells = self.as_array()
        if not np.all(np.isfinite(cells)) or np.any(cells < -TOL):
            raise ValidationError(f"joint distribution has invalid cells {cells.tolist()}")
        if abs(cells.sum() - 1.0) > TOL:
            raise ValidationError(f"joint distribution sums to {cells.sum()!r}")

    @classmethod
    def from_array(cls, cells) -> "JointDistribution":
        pp, pm, mp, mm = (float(c) for c in np.asarray(cells, dtype=float).ravel())
        return cls(pp, pm, mp, mm)

    def as_array(self) -> np.ndarray:
        return np.array([self.pp, self.pm, self.mp, self.mm])

    def __getitem__(self, key: tuple[str, str]) -> float:
        return float(self.as_array()[CELLS.index(key)])

    def signal_marginal(self) -> tuple[float, float]:
        return self.pp + self.pm, self.mp + self.mm

    def idler_marginal(self) -> tuple[float, float]:
        return self.pp + self.mp, self.pm + self.mm

    def conditionals(self) -> Conditionals:
        """Signal probabilities conditioned on each idler outcome."""
        qp, qm = self.idler_marginal()
        if qp <= 0.0 or qm <= 0.0:
            raise ValidationError("an idler outcome has zero probability; conditionals undefined")
        return Conditionals((self.pp / qp, self.mp / qp), (self.pm / qm, self.mm / qm))

    def reverse_conditionals(self) -> Conditionals:
        """Idler probabilities conditioned on each signal outcome, same layout."""
        pp, pm = self.signal_marginal()
        return Conditionals((self.pp / pp, self.pm / pp), (self.mp / pm, self.mm / pm))

    def correlator(self) -> float:
        return self.pp + self.mm - self.pm - self.mp


def _joint_from_dot(d: float) -> JointDistribution:
    d = min(max(d, -1.0), 1.0)
    same, diff = (1.0 - d) / 4.0, (1.0 + d) / 4.0
    return JointDistribution(same, diff, diff, same)


def conditional_probabilities(jc: JointConfig) -> Conditionals:
    """``P(D+-|D'+) = (1 -+ n1.n2)/2`` and ``P(D+-|D'-) = (1 +- n1.n2)/2``."""
    d = min(max(jc.dot, -1.0), 1.0)
    lo, hi = (1.0 - d) / 2.0, (1.0 + d) / 2.0
    return Conditionals((lo, hi), (hi, lo))


def joint_distribution(jc: JointConfig) -> JointDistribution:
    # each idler outcome has probability 1/2 for the singlet
    return _joint_from_dot(jc.dot)


def _check_direction(n: np.ndarray) -> np.ndarray:
    n = np.asarray(n, dtype=float)
    if n.shape != (3,) or abs(np.linalg.norm(n) - 1.0) > 1e-9:
        raise ValidationError(f"{n.tolist()} is not a unit 3-vector")
    return n


def correlator(n1: np.ndarray, n2: np.ndarray) -> float:
    """Singlet correlator ``E(n1, n2)``, evaluated from the joint cells."""
    d = float(np.dot(_check_direction(n1), _check_direction(n2)))
    return _joint_from_dot(d).correlator()


def chsh_s(a: np.ndarray, a_prime: np.ndarray, b: np.ndarray, b_prime: np.ndarray) -> float:
    """``S = E(a,b) - E(a,b') + E(a',b) + E(a',b')``."""
    return (
        correlator(a, b) - correlator(a, b_prime) + correlator(a_prime, b) + correlator(a_prime, b_prime)
    )


def coplanar_direction(angle: float) -> np.ndarray:
    """Unit vector at ``angle`` (radians) in the x-z plane, measured from +z."""
    return np.array([math.sin(angle), 0.0, math.cos(angle)])


OPTIMAL_CHSH_ANGLES = (0.0, math.pi / 2, math.pi / 4, 3 * math.pi / 4)
"""Coplanar angles for (a, a', b, b') reaching ``|S| = 2 sqrt(2)``."""
