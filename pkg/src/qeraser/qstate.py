"""Exact linear algebra for two- and four-level systems.

States are plain complex numpy arrays: shape ``(2,)`` for a single quanton,
``(4,)`` for a signal/idler pair ordered as ``signal (x) idler``, and
``(2, 2)`` / ``(4, 4)`` for density operators. Everything returned here is
made read-only so values can be shared between threads.
"""

from __future__ import annotations

from enum import Enum

import numpy as np

TOL = 1e-12
"""Absolute tolerance used for every exact-math check in the package."""


class ValidationError(ValueError):
    """Raised when an input violates a documented invariant."""


class Basis(str, Enum):
    """Labels for the ordered two-element bases used in the toolkit."""

    POLARIZATION = "polarization"  # (horizontal, vertical)
    SIGNAL_PATH = "signal-path"  # (path 1, path 2)
    IDLER_PATH = "idler-path"  # (-path y, path x)


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def ket(*amplitudes: complex) -> np.ndarray:
    """Build a normalized state from its amplitudes.

    Raises ``ValidationError`` when the amplitudes are not normalized.
    """
    v = np.array(amplitudes, dtype=complex)
    if v.shape not in ((2,), (4,)):
        raise ValidationError(f"expected 2 or 4 amplitudes, got {v.size}")
    check_normalized(v)
    return _frozen(v)


def check_normalized(v: np.ndarray, tol: float = TOL) -> None:
    v = np.asarray(v)
    if not np.all(np.isfinite(v)):
        raise ValidationError("state has non-finite amplitudes")
    norm2 = float(np.vdot(v, v).real)
    if abs(norm2 - 1.0) > tol:
        raise ValidationError(f"state is not normalized (|psi|^2 = {norm2!r})")


def check_unitary(u: np.ndarray, tol: float = TOL) -> None:
    u = np.asarray(u)
    if u.shape != (2, 2):
        raise ValidationError(f"expected a 2x2 matrix, got shape {u.shape}")
    err = np.max(np.abs(u @ u.conj().T - np.eye(2)))
    if err > tol:
        raise ValidationError(f"matrix is not unitary (max |UU^dag - I| = {err:.3e})")


def check_density(rho: np.ndarray, tol: float = TOL) -> None:
    rho = np.asarray(rho)
    n = rho.shape[0] if rho.ndim == 2 else 0
    if rho.shape != (n, n) or n not in (2, 4):
        raise ValidationError(f"expected a 2x2 or 4x4 density matrix, got shape {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise ValidationError("density matrix is not Hermitian")
    tr = np.trace(rho)
    if abs(tr - 1.0) > tol:
        raise ValidationError(f"density matrix trace is {tr!r}, not 1")
    if np.min(np.linalg.eigvalsh(rho)) < -tol:
        raise ValidationError("density matrix has a negative eigenvalue")


def density(state: np.ndarray) -> np.ndarray:
    """Projector |s><s| for a normalized pure state."""
    check_normalized(state)
    s = np.asarray(state, dtype=complex)
    return _frozen(np.outer(s, s.conj()))


def tensor(s: np.ndarray, i: np.ndarray) -> np.ndarray:
    """Product state ``s (x) i`` of two normalized single-quanton states."""
    for v in (s, i):
        if np.shape(v) != (2,):
            raise ValidationError(f"tensor expects two 2-component states, got {np.shape(v)}")
        check_normalized(v)
    return _frozen(np.kron(np.asarray(s, dtype=complex), np.asarray(i, dtype=complex)))


def partial_trace(rho4: np.ndarray, keep: str) -> np.ndarray:
    """Reduce a two-party density operator to one party.

    ``keep`` is ``"signal"`` (first factor) or ``"idler"`` (second factor).
    """
    rho4 = np.asarray(rho4, dtype=complex)
    if rho4.shape != (4, 4):
        raise ValidationError(f"expected a 4x4 density matrix, got shape {rho4.shape}")
    check_density(rho4)
    r = rho4.reshape(2, 2, 2, 2)
    if keep == "signal":
        out = np.einsum("ijkj->ik", r)
    elif keep == "idler":
        out = np.einsum("ijil->jl", r)
    else:
        raise ValidationError(f"keep must be 'signal' or 'idler', not {keep!r}")
    return _frozen(np.ascontiguousarray(out))


def apply_unitary(u: np.ndarray, s: np.ndarray) -> np.ndarray:
    check_unitary(u)
    check_normalized(s)
    return _frozen(np.asarray(u, dtype=complex) @ np.asarray(s, dtype=complex))


def same_ray(a: np.ndarray, b: np.ndarray, tol: float = TOL) -> bool:
    """True when two normalized states differ at most by a global phase."""
    return abs(abs(np.vdot(a, b)) - 1.0) <= tol


def orthogonal_complement(s: np.ndarray) -> np.ndarray:
    """The unit vector orthogonal to a two-component state, ``(-b*, a*)``."""
    a, b = np.asarray(s, dtype=complex)
    return _frozen(np.array([-np.conj(b), np.conj(a)]))


def bloch_vector(state: np.ndarray) -> np.ndarray:
    """Bloch vector of a 2-level pure state or density operator.

    Uses the convention of the spinor basis: ``(cos(t/2), e^{ip} sin(t/2))``
    maps to ``(sin t cos p, sin t sin p, cos t)``.
    """
    state = np.asarray(state, dtype=complex)
    rho = np.outer(state, state.conj()) if state.ndim == 1 else state
    c = 2.0 * rho[1, 0]
    return np.array([c.real, c.imag, (rho[0, 0] - rho[1, 1]).real])


UNPOLARIZED = _frozen(0.5 * np.eye(2, dtype=complex))
