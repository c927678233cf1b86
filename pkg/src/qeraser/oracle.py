"""Brute-force state-vector routes to the detector statistics.

These build the full pair (or pair + environment) state and push it through
the explicit interferometer transfer matrices, never touching the closed-form
probability expressions. They exist to check those expressions.
"""

from __future__ import annotations

import math

import numpy as np

from .epr import SINGLET, JointConfig
from .interferometer import transfer_matrix
from .qstate import check_normalized
from .scully_druhl import SourceOverlap


def singlet_joint(jc: JointConfig) -> np.ndarray:
    """Joint cells ``(++, +-, -+, --)`` from the singlet through both transfers."""
    u = np.kron(transfer_matrix(jc.alice), transfer_matrix(jc.bob))
    out = u @ SINGLET
    check_normalized(out)
    return np.abs(out) ** 2


def environment_states(overlap: SourceOverlap) -> tuple[np.ndarray, np.ndarray]:
    """Explicit 2-level environment vectors with ``<m|n> = mu_s e^{i delta}``."""
    m = np.array([1.0, 0.0], dtype=complex)
    n = np.array([overlap.value, math.sqrt(max(1.0 - overlap.mu_s**2, 0.0))], dtype=complex)
    return m, n


def decohered_pair(overlap: SourceOverlap) -> np.ndarray:
    """``(|+>_s|->_i|m> - |->_s|+>_i|n>) / sqrt(2)`` as an 8-vector (signal, idler, env)."""
    m, n = environment_states(overlap)
    plus, minus = np.eye(2, dtype=complex)
    psi = (np.kron(np.kron(plus, minus), m) - np.kron(np.kron(minus, plus), n)) / math.sqrt(2)
    check_normalized(psi)
    return psi


def decohered_joint(overlap: SourceOverlap, jc: JointConfig) -> np.ndarray:
    """Joint cells for the pair entangled with an environment, environment traced out."""
    u = np.kron(np.kron(transfer_matrix(jc.alice), transfer_matrix(jc.bob)), np.eye(2))
    out = (u @ decohered_pair(overlap)).reshape(2, 2, 2)
    return np.sum(np.abs(out) ** 2, axis=2).ravel()


def decohered_conditionals(overlap: SourceOverlap, jc: JointConfig) -> tuple[np.ndarray, np.ndarray]:
    """``(cond, idler_marginal)`` with ``cond[a, b] = P(D_a | D'_b)``."""
    joint = decohered_joint(overlap, jc).reshape(2, 2)
    marg = joint.sum(axis=0)
    return joint / marg, marg
