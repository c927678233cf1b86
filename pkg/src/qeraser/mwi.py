"""Many-worlds bookkeeping for the two-interferometer eraser.

The universal state is the photon pair together with two detector registers.
It is carried through three stages:

``initial``
    photons in the path doublet, both registers ready;
``interfered``
    photons past both interferometers (detector basis), registers still ready;
``final``
    each detector has absorbed its photon; four register branches remain.

Registers are orthonormal pointer labels, and the photon/register
interaction ``|D_a>|ready> -> |registered a>`` is taken as the definition of
a measurement. The source registers are not tracked.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .epr import CELLS, SINGLET, JointConfig, JointDistribution
from .interferometer import projective_matrix
from .qstate import TOL

STAGES = ("initial", "interfered", "final")
UNRESOLVED = "unresolved"


class StateNotFinalError(RuntimeError):
    """Branch frequencies were requested before every photon was registered."""


@dataclass(frozen=True)
class UniversalState:
    """Photon component (registers ready) plus registered branch amplitudes.

    ``photons`` is the 4-component pair state attached to ``|ready>|ready>``,
    ordered signal (x) idler. ``branches`` maps ``(a, b)`` with a, b in
    ``{"+", "-"}`` to the amplitude of ``|registered a>|registered' b>``.
    """

    stage: str
    photons: np.ndarray
    branches: dict = field(default_factory=dict)

    def amplitudes(self) -> dict:
        """Amplitude per branch label; the unresolved entry is the norm of ``photons``."""
        out = {cell: complex(self.branches.get(cell, 0.0)) for cell in CELLS}
        out[UNRESOLVED] = float(np.linalg.norm(self.photons))
        return out

    def norm(self) -> float:
        branch2 = sum(abs(a) ** 2 for a in self.branches.values())
        return math.sqrt(float(np.vdot(self.photons, self.photons).real) + branch2)


def initial_state() -> UniversalState:
    """``(|+>|-> - |->|+>) / sqrt(2)`` with both registers ready."""
    return UniversalState("initial", SINGLET.copy(), {})


def interfere(u: UniversalState, jc: JointConfig) -> UniversalState:
    """Send each photon through its interferometer (registers untouched)."""
    if u.stage != "initial":
        raise ValueError(f"cannot interfere a state at stage {u.stage!r}")
    m = np.kron(projective_matrix(jc.alice), projective_matrix(jc.bob))
    return UniversalState("interfered", m @ u.photons, dict(u.branches))


def register(u: UniversalState) -> UniversalState:
    """Detector interaction: each detector-basis component becomes a branch."""
    if u.stage != "interfered":
        raise ValueError(f"cannot register a state at stage {u.stage!r}")
    branches = dict(u.branches)
    for cell, amp in zip(CELLS, u.photons):
        branches[cell] = branches.get(cell, 0.0) + complex(amp)
    return UniversalState("final", np.zeros(4, dtype=complex), branches)


def evolve_universal(jc: JointConfig) -> UniversalState:
    return register(interfere(initial_state(), jc))


def stages(jc: JointConfig) -> tuple[UniversalState, UniversalState, UniversalState]:
    u0 = initial_state()
    u1 = interfere(u0, jc)
    return u0, u1, register(u1)


def branch_frequencies(u: UniversalState) -> JointDistribution:
    """Relative frequency of each branch, ``|amplitude|^2``."""
    if np.linalg.norm(u.photons) > TOL:
        raise StateNotFinalError("state still has amplitude on unregistered detectors")
    cells = np.array([abs(u.branches.get(cell, 0.0)) ** 2 for cell in CELLS])
    return JointDistribution.from_array(cells)


def signal_path_weights(jc: JointConfig) -> np.ndarray:
    """Weight of each signal path inside each signal-detector amplitude.

    Entry ``[p, a]`` is the squared norm of the term of the interfered state
    that came from signal path ``p`` (0 for ``|+>``, 1 for ``|->``) and ends at
    ``D_a``. Both paths contribute to both detectors unless ``theta1`` is 0 or pi.
    """
    m1 = projective_matrix(jc.alice)
    m2 = projective_matrix(jc.bob)
    pair = SINGLET.reshape(2, 2)
    w = np.zeros((2, 2))
    for p in range(2):
        # idler state left attached to signal path p
        idler_out = m2 @ pair[p]
        for a in range(2):
            w[p, a] = abs(m1[a, p]) ** 2 * float(np.vdot(idler_out, idler_out).real)
    return w
