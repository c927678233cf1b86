"""Invariant suite behind ``qeraser selftest``."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import epr, mwi, oracle
from . import scully_druhl as sd
from .interferometer import InterferometerConfig, bloch_of, detect_probabilities, spinor_basis
from .qstate import TOL


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _random_jc(rng) -> epr.JointConfig:
    t1, t2 = rng.uniform(0, math.pi, 2)
    p1, p2 = rng.uniform(0, 2 * math.pi, 2)
    return epr.JointConfig.from_angles(t1, p1, t2, p2)


def check_inner_product(rng, n: int) -> tuple[bool, str]:
    worst = 0.0
    for _ in range(n):
        t, v = rng.uniform(0, math.pi, 2)
        p, w = rng.uniform(0, 2 * math.pi, 2)
        plus, minus = spinor_basis(t, p)
        target, _ = spinor_basis(v, w)
        d = float(np.dot(bloch_of(t, p), bloch_of(v, w)))
        worst = max(
            worst,
            abs(abs(np.vdot(plus, target)) ** 2 - (1 + d) / 2),
            abs(abs(np.vdot(minus, target)) ** 2 - (1 - d) / 2),
        )
    return worst <= TOL, f"max error {worst:.2e}"


def check_normalization(rng, n: int) -> tuple[bool, str]:
    worst = 0.0
    for _ in range(n):
        t, v = rng.uniform(0, math.pi, 2)
        p, w = rng.uniform(0, 2 * math.pi, 2)
        plus, _ = spinor_basis(v, w)
        worst = max(worst, abs(sum(detect_probabilities(InterferometerConfig(t, p), plus)) - 1))
    return worst <= TOL, f"max error {worst:.2e}"


def check_singlet_oracle(rng, n: int) -> tuple[bool, str]:
    worst = 0.0
    for _ in range(n):
        jc = _random_jc(rng)
        worst = max(worst, np.max(np.abs(oracle.singlet_joint(jc) - epr.joint_distribution(jc).as_array())))
    return worst <= TOL, f"max |closed form - state vector| {worst:.2e}"


def check_no_signaling(rng, n: int) -> tuple[bool, str]:
    worst = 0.0
    for _ in range(n):
        dist = epr.joint_distribution(_random_jc(rng))
        worst = max(worst, *(abs(p - 0.5) for p in dist.signal_marginal() + dist.idler_marginal()))
    return worst <= TOL, f"max marginal deviation {worst:.2e}"


def check_chsh(rng, n: int) -> tuple[bool, str]:
    best = abs(epr.chsh_s(*(epr.coplanar_direction(a) for a in epr.OPTIMAL_CHSH_ANGLES)))
    for _ in range(n):
        v = rng.normal(size=(4, 3))
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        best = max(best, abs(epr.chsh_s(*v)))
    ok = 2 * math.sqrt(2) - 1e-3 <= best <= 2 * math.sqrt(2) + 1e-9
    return ok, f"max |S| {best:.12f}"


def check_duality(rng, n: int) -> tuple[bool, str]:
    worst = -np.inf
    for mu in np.linspace(0, 1, n):
        for theta in np.linspace(0, math.pi, n):
            worst = max(worst, sd.duality_check(sd.SourceOverlap(mu), theta)[2] - 1.0)
    return worst <= TOL, f"max D^2 + V^2 - 1 = {worst:.2e}"


def check_uqsd(rng, n: int) -> tuple[bool, str]:
    worst = 0.0
    for _ in range(n):
        a, b = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        a, b = a / np.linalg.norm(a), b / np.linalg.norm(b)
        povm = sd.uqsd_build(a, b)
        total = povm.f1 + povm.f2 + povm.f_inconclusive
        p1 = sd.uqsd_outcome_distribution(povm, 1)
        p2 = sd.uqsd_outcome_distribution(povm, 2)
        neg = max(-min(np.linalg.eigvalsh(f).min() for f in povm.elements()), 0.0)
        worst = max(
            worst,
            np.max(np.abs(total - np.eye(2))),
            neg,
            p1[1],
            p2[0],
            abs(p1[0] - povm.p_conclusive),
            abs(p1[0] - (1 - abs(np.vdot(a, b)))),
        )
    return worst <= TOL, f"max violation {worst:.2e}"


def check_nonoptimal(rng, n: int) -> tuple[bool, str]:
    worst = 0.0
    for _ in range(n):
        jc = _random_jc(rng)
        ov = sd.SourceOverlap(rng.uniform(0, 1), rng.uniform(-math.pi, math.pi))
        cond = sd.nonoptimal_conditionals(ov, jc)
        ref, marg = oracle.decohered_conditionals(ov, jc)
        mine = np.array([[cond.given_plus[0], cond.given_minus[0]], [cond.given_plus[1], cond.given_minus[1]]])
        worst = max(worst, np.max(np.abs(mine - ref)), np.max(np.abs(marg - 0.5)))
    return worst <= 1e-10, f"max |closed form - 8-dim oracle| {worst:.2e}"


def check_mwi(rng, n: int) -> tuple[bool, str]:
    worst = 0.0
    for _ in range(n):
        jc = _random_jc(rng)
        u = mwi.evolve_universal(jc)
        worst = max(
            worst,
            np.max(np.abs(mwi.branch_frequencies(u).as_array() - epr.joint_distribution(jc).as_array())),
            abs(u.norm() - 1.0),
        )
    return worst <= TOL, f"max |branch - joint| {worst:.2e}"


CHECKS: list[tuple[str, Callable, int]] = [
    ("inner-product identity", check_inner_product, 2000),
    ("probability normalization", check_normalization, 2000),
    ("singlet state-vector oracle", check_singlet_oracle, 2000),
    ("no-signaling marginals", check_no_signaling, 2000),
    ("CHSH bound and violation", check_chsh, 5000),
    ("visibility/distinguishability duality", check_duality, 100),
    ("UQSD POVM", check_uqsd, 1000),
    ("nonoptimal erasure oracle", check_nonoptimal, 500),
    ("MWI vs Copenhagen", check_mwi, 2000),
]


def run(seed: int = 0, scale: float = 1.0) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    results = []
    for name, fn, n in CHECKS:
        ok, detail = fn(rng, max(int(n * scale), 2))
        results.append(CheckResult(name, bool(ok), detail))
    return results
