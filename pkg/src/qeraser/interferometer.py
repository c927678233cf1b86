"""A single Mach-Zehnder interferometer with a nonsymmetric beam splitter.

A polarizing beam splitter sends horizontal light along path 1 and vertical
light along path 2; path 1 picks up a phase ``phi`` and path 2 is rotated to
horizontal before both meet at a lossless beam splitter whose mixing angle is
``theta``. The whole device acts like a Stern-Gerlach apparatus pointed along
``n(theta, phi) = (sin theta cos phi, sin theta sin phi, cos theta)``:
detector ``D+`` fires with probability ``|<n(theta, phi), +|psi>|^2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .qstate import TOL, ValidationError, bloch_vector, check_density, check_normalized

TWO_PI = 2.0 * math.pi


def _check_polar(angle: float, name: str) -> float:
    angle = float(angle)
    if not math.isfinite(angle) or not (0.0 <= angle <= math.pi):
        raise ValidationError(f"{name}={angle!r} is outside the legal range [0, pi]")
    return angle


@dataclass(frozen=True)
class InterferometerConfig:
    """Beam-splitter mixing angle ``theta`` in [0, pi] and path phase ``phi``.

    ``phi`` is reduced modulo 2*pi on construction; an out-of-range ``theta``
    is rejected rather than clamped.
    """

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "theta", _check_polar(self.theta, "theta"))
        phi = float(self.phi)
        if not math.isfinite(phi):
            raise ValidationError(f"phi={phi!r} is not finite")
        object.__setattr__(self, "phi", phi % TWO_PI)

    @property
    def alpha(self) -> float:
        return math.cos(self.theta / 2)

    @property
    def beta(self) -> float:
        return math.sin(self.theta / 2)

    @property
    def direction(self) -> np.ndarray:
        return bloch_of(self.theta, self.phi)


def spinor_basis(vartheta: float, varphi: float) -> tuple[np.ndarray, np.ndarray]:
    """The orthonormal pair ``|n,+>``, ``|n,->`` for the direction (vartheta, varphi)."""
    vartheta = _check_polar(vartheta, "vartheta")
    c, s = math.cos(vartheta / 2), math.sin(vartheta / 2)
    e = complex(math.cos(varphi), math.sin(varphi))
    plus = np.array([c, e * s], dtype=complex)
    minus = np.array([s, -e * c], dtype=complex)
    plus.setflags(write=False)
    minus.setflags(write=False)
    return plus, minus


def bloch_of(vartheta: float, varphi: float) -> np.ndarray:
    vartheta = _check_polar(vartheta, "vartheta")
    st = math.sin(vartheta)
    v = np.array([st * math.cos(varphi), st * math.sin(varphi), math.cos(vartheta)])
    v.setflags(write=False)
    return v


def beam_splitter(theta: float) -> np.ndarray:
    """Amplitude map of the beam splitter from (path 1, path 2) to (D+, D-)."""
    theta = _check_polar(theta, "theta")
    a, b = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[a, b], [b, -a]], dtype=complex)


def projective_matrix(config: InterferometerConfig) -> np.ndarray:
    """Rows are ``<n(theta, phi), +|`` and ``<n(theta, phi), -|``.

    This is the interferometer transfer with the common phase ``e^{i phi}``
    stripped off; probabilities are identical.
    """
    plus, minus = spinor_basis(config.theta, config.phi)
    return np.array([plus.conj(), minus.conj()])


def transfer_matrix(config: InterferometerConfig) -> np.ndarray:
    """Full amplitude map from (horizontal, vertical) input to (D+, D-).

    Horizontal light takes path 1 and picks up ``e^{i phi}`` before the beam
    splitter; vertical light takes path 2 through the rotator.
    """
    phase = np.diag([complex(math.cos(config.phi), math.sin(config.phi)), 1.0])
    return beam_splitter(config.theta) @ phase


def transfer(config: InterferometerConfig, state: np.ndarray) -> np.ndarray:
    """Amplitudes of ``state`` at (D+, D-)."""
    check_normalized(state)
    out = transfer_matrix(config) @ np.asarray(state, dtype=complex)
    out.setflags(write=False)
    return out


def detect_probabilities(config: InterferometerConfig, state: np.ndarray) -> tuple[float, float]:
    """``(P(D+), P(D-))`` for a pure two-component state or a 2x2 density matrix."""
    state = np.asarray(state, dtype=complex)
    t = transfer_matrix(config)
    if state.shape == (2,):
        check_normalized(state)
        p = np.abs(t @ state) ** 2
    elif state.shape == (2, 2):
        check_density(state)
        p = np.real(np.diag(t @ state @ t.conj().T))
    else:
        raise ValidationError(f"expected a 2-vector or 2x2 density matrix, got shape {state.shape}")
    p_plus = min(max(float(p[0]), 0.0), 1.0)
    return p_plus, 1.0 - p_plus


def fringe_visibility(theta: float, state: Union[str, np.ndarray] = "pure-equatorial") -> float:
    """Contrast ``(max - min) / (max + min)`` of ``P(D+)`` as ``phi`` sweeps a period.

    ``state`` is either an input class (``"pure-equatorial"`` or
    ``"unpolarized"``) or an explicit state. For an input with Bloch vector
    ``r`` the fringe is ``(1 + cos(theta) r_z + sin(theta) |r_perp| cos(phi - phi0)) / 2``,
    so max and min are available in closed form.
    """
    theta = _check_polar(theta, "theta")
    if isinstance(state, str):
        if state in ("pure-equatorial", "equatorial"):
            r_perp, r_z = 1.0, 0.0
        elif state in ("unpolarized", "density"):
            r_perp, r_z = 0.0, 0.0
        else:
            raise ValidationError(f"unknown input class {state!r}")
    else:
        arr = np.asarray(state, dtype=complex)
        if arr.ndim == 1:
            check_normalized(arr)
        else:
            check_density(arr)
        r = bloch_vector(arr)
        r_perp, r_z = math.hypot(r[0], r[1]), float(r[2])
    amp = abs(math.sin(theta)) * r_perp
    mean = 1.0 + math.cos(theta) * r_z
    if mean <= TOL:
        return 0.0
    return amp / mean
