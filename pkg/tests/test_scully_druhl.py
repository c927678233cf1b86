import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import azimuth, polar, random_joint_configs, random_state, unit_interval
from qeraser import epr, oracle
from qeraser import scully_druhl as sd
from qeraser.epr import JointConfig
from qeraser.interferometer import InterferometerConfig, detect_probabilities, transfer_matrix
from qeraser.qstate import TOL, ValidationError

CELLS = epr.CELLS


# --- source models -----------------------------------------------------------


def test_identical_and_orthogonal_sources():
    assert sd.purity(sd.SourceModel.identical()) == sd.SourceOverlap(1.0, 0.0)
    assert sd.purity(sd.SourceModel.orthogonal()).mu_s == 0.0
    assert sd.purity(sd.SourceModel.ideal_idler()).mu_s == 0.0
    ov = sd.SourceOverlap(0.4, 0.3)
    assert sd.purity(sd.SourceModel.custom(ov)) == ov


def test_source_validation():
    with pytest.raises(ValidationError):
        sd.SourceOverlap(1.2)
    with pytest.raises(ValidationError):
        sd.SourceModel("laser")
    with pytest.raises(ValidationError):
        sd.SourceModel("custom")


def test_spacs_unit_amplitudes():
    assert abs(sd.purity(sd.SourceModel.spacs(1, 1)).mu_s - 0.5) <= TOL
    assert abs(sd.purity(sd.SourceModel.spacs(1j, -1)).mu_s - 0.5) <= TOL


def _fock_coherent(alpha, n_max):
    n = np.arange(n_max)
    log_fact = np.array([math.lgamma(k + 1) for k in n])
    amps = np.exp(-abs(alpha) ** 2 / 2 - 0.5 * log_fact) * alpha**n
    return amps.astype(complex)


def _fock_creation(n_max):
    return np.diag(np.sqrt(np.arange(1, n_max)), k=-1).astype(complex)


def test_spacs_overlap_matches_fock_space(rng):
    n_max = 80
    adag = _fock_creation(n_max)
    for _ in range(20):
        a1, a2 = rng.normal(size=2) + 1j * rng.normal(size=2)
        coh1, coh2 = _fock_coherent(a1, n_max), _fock_coherent(a2, n_max)
        spacs1, spacs2 = adag @ coh1, adag @ coh2
        spacs1 /= np.linalg.norm(spacs1)
        spacs2 /= np.linalg.norm(spacs2)
        # <A_x,B_y|B_x,A_y> with A = coherent, B = photon-added
        brute = np.vdot(coh1, spacs1) * np.vdot(spacs2, coh2)
        assert abs(sd.spacs_overlap(a1, a2) - brute) < 1e-10
        ov = sd.purity(sd.SourceModel.spacs(a1, a2))
        assert abs(ov.mu_s - abs(a1) * abs(a2) / math.sqrt((1 + abs(a1) ** 2) * (1 + abs(a2) ** 2))) <= TOL


def test_purity_from_density_roundtrip():
    for mu in np.linspace(0, 1, 11):
        rho = sd.source_density(sd.SourceOverlap(mu, 0.7))
        assert abs(sd.purity_from_density(rho) - mu) < 1e-9


# --- complementarity -----------------------------------------------------------


@pytest.mark.parametrize("mu, expected", [(1.0, 0.0), (0.0, 1.0), (0.3, 0.7)])
def test_distinguishability(mu, expected):
    assert abs(sd.distinguishability(sd.SourceOverlap(mu)) - expected) <= TOL


def test_distinguishability_is_uqsd_conclusive_rate():
    for mu in np.linspace(0, 1, 21):
        ov = sd.SourceOverlap(mu, 1.3)
        assert abs(sd.which_way_povm(ov).p_conclusive - sd.distinguishability(ov)) <= TOL


def test_visibility_examples():
    assert abs(sd.visibility(sd.SourceOverlap(1.0), math.pi / 2) - 1) <= TOL
    for theta in np.linspace(0, math.pi, 7):
        assert sd.visibility(sd.SourceOverlap(0.0), theta) == 0.0
    assert abs(sd.visibility(sd.SourceOverlap(0.5), math.pi / 2) - 0.5) <= TOL


def test_visibility_matches_phi_sweep():
    phis = np.linspace(0, 2 * math.pi, 2001)
    for mu, theta, delta in [(0.5, math.pi / 2, 0.0), (0.8, 1.0, 0.4), (0.2, 2.5, -1.0)]:
        ov = sd.SourceOverlap(mu, delta)
        p = np.array([sd.ensemble_probabilities(ov, theta, f)[0] for f in phis])
        assert abs((p.max() - p.min()) / (p.max() + p.min()) - sd.visibility(ov, theta)) < 1e-6


@given(polar, azimuth)
def test_ensemble_probability_special_cases(theta, phi):
    p = sd.ensemble_probabilities(sd.SourceOverlap(1.0, 0.0), theta, phi)
    assert abs(p[0] - (1 + math.sin(theta) * math.cos(phi)) / 2) <= TOL
    assert sd.ensemble_probabilities(sd.SourceOverlap(0.0), theta, phi) == (0.5, 0.5)


def test_ensemble_probability_substitution():
    ov = sd.SourceOverlap(0.5, 0.9)
    p = sd.ensemble_probabilities(ov, math.pi / 2, -0.9)
    assert abs(p[0] - 0.75) <= TOL and abs(p[1] - 0.25) <= TOL


def test_ensemble_probabilities_match_record_state_vector(rng):
    # path doublet entangled with explicit record states, records traced out
    for _ in range(500):
        ov = sd.SourceOverlap(rng.uniform(), rng.uniform(-math.pi, math.pi))
        theta, phi = rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi)
        psi1, psi2 = sd.record_states(ov)
        pair = (np.kron([1, 0], psi1) + np.kron([0, 1], psi2)) / math.sqrt(2)
        out = (np.kron(transfer_matrix(InterferometerConfig(theta, phi)), np.eye(2)) @ pair).reshape(2, 2)
        p_plus = float(np.sum(np.abs(out[0]) ** 2))
        assert abs(sd.ensemble_probabilities(ov, theta, phi)[0] - p_plus) <= TOL
        rho = sd.source_density(ov)
        assert abs(detect_probabilities(InterferometerConfig(theta, phi), rho)[0] - p_plus) <= TOL


def test_duality_examples():
    assert abs(sd.duality_check(sd.SourceOverlap(1.0), math.pi / 2)[2] - 1) <= TOL
    for theta in np.linspace(0, math.pi, 5):
        assert abs(sd.duality_check(sd.SourceOverlap(0.0), theta)[2] - 1) <= TOL
    d2, v2, total = sd.duality_check(sd.SourceOverlap(0.5), math.pi / 4)
    assert abs(d2 - 0.25) <= TOL and abs(v2 - 0.125) <= TOL and abs(total - 0.375) <= TOL


def test_duality_grid_and_boundary():
    mus = np.linspace(0, 1, 100)
    thetas = np.linspace(0, math.pi, 100)
    for mu in mus:
        for theta in thetas:
            total = sd.duality_check(sd.SourceOverlap(mu), theta)[2]
            assert abs(total - ((1 - mu) ** 2 + mu**2 * math.sin(theta) ** 2)) <= TOL
            assert total <= 1 + TOL
            on_boundary = mu == 0.0 or (mu == 1.0 and abs(abs(math.sin(theta)) - 1) <= TOL)
            assert (abs(total - 1) <= TOL) == on_boundary


# --- UQSD --------------------------------------------------------------------


def _pair_with_overlap(s):
    return np.array([1, 0], complex), np.array([s, math.sqrt(1 - s * s)], complex)


def test_uqsd_orthogonal():
    povm = sd.uqsd_build(*_pair_with_overlap(0.0))
    assert abs(povm.p_conclusive - 1) <= TOL
    assert np.allclose(povm.f_inconclusive, 0, atol=TOL)
    assert np.allclose(sd.uqsd_outcome_distribution(povm, 1), (1, 0, 0), atol=TOL)


def test_uqsd_half_overlap():
    povm = sd.uqsd_build(*_pair_with_overlap(0.5))
    assert abs(povm.p_conclusive - 0.5) <= TOL
    assert np.allclose(sd.uqsd_outcome_distribution(povm, 1), (0.5, 0, 0.5), atol=TOL)
    assert np.allclose(sd.uqsd_outcome_distribution(povm, 2), (0, 0.5, 0.5), atol=TOL)


def test_uqsd_identical_inputs():
    psi = np.array([0.6, 0.8j])
    povm = sd.uqsd_build(psi, psi)
    assert povm.p_conclusive == pytest.approx(0.0, abs=TOL)
    assert np.allclose(povm.f1, 0) and np.allclose(povm.f2, 0)
    assert np.allclose(povm.f_inconclusive, np.eye(2))


def test_uqsd_random_pairs(rng):
    worst = 0.0
    for _ in range(10_000):
        a, b = random_state(rng), random_state(rng)
        povm = sd.uqsd_build(a, b)
        f1, f2, fq = povm.elements()
        p1, p2 = sd.uqsd_outcome_distribution(povm, 1), sd.uqsd_outcome_distribution(povm, 2)
        conc = 1 - abs(np.vdot(a, b))
        worst = max(
            worst,
            np.max(np.abs(f1 + f2 + fq - np.eye(2))),
            -min(np.linalg.eigvalsh(f).min() for f in (f1, f2, fq)),
            abs(np.vdot(b, f1 @ b)),
            abs(np.vdot(a, f2 @ a)),
            p1[1],
            p2[0],
            abs(p1[0] - conc),
            abs(p2[1] - conc),
        )
    assert worst <= TOL


def test_uqsd_explicit_state_argument(rng):
    a, b = random_state(rng), random_state(rng)
    povm = sd.uqsd_build(a, b)
    assert sd.uqsd_outcome_distribution(povm, b)[0] <= TOL
    with pytest.raises(ValidationError):
        sd.uqsd_outcome_distribution(povm, 3)


# --- erasure -------------------------------------------------------------------


def test_which_way_marking():
    cond = sd.optimal_conditionals(JointConfig.from_angles(math.pi / 3, 0.4, 0.0, 1.0))
    assert abs(cond["+", "+"] - 0.25) <= TOL
    assert abs(cond["+", "+"] - math.sin(math.pi / 6) ** 2) <= TOL


@given(polar, azimuth, azimuth)
def test_optimal_equator_fringe(theta1, phi1, phi2):
    cond = sd.optimal_conditionals(JointConfig.from_angles(theta1, phi1, math.pi / 2, phi2))
    assert abs(cond["+", "+"] - (1 - math.sin(theta1) * math.cos(phi1 - phi2)) / 2) <= TOL


def test_optimal_matches_epr(rng):
    worst = 0.0
    for jc in random_joint_configs(rng, 10_000):
        a, b = sd.optimal_conditionals(jc), epr.conditional_probabilities(jc)
        worst = max(worst, *(abs(a[c] - b[c]) for c in CELLS))
    assert worst <= TOL


@given(polar, azimuth, polar, azimuth)
def test_nonoptimal_full_purity_is_optimal(t1, p1, t2, p2):
    jc = JointConfig.from_angles(t1, p1, t2, p2)
    a = sd.nonoptimal_conditionals(sd.SourceOverlap(1.0, 0.0), jc)
    b = epr.conditional_probabilities(jc)
    for c in CELLS:
        assert abs(a[c] - b[c]) <= TOL


@given(polar, polar, azimuth, azimuth)
def test_nonoptimal_zero_purity_has_no_fringe(t1, t2, p1, p2):
    cond = sd.nonoptimal_conditionals(sd.SourceOverlap(0.0), JointConfig.from_angles(t1, p1, t2, p2))
    expected = math.cos(t1 / 2) ** 2 * math.sin(t2 / 2) ** 2 + math.sin(t1 / 2) ** 2 * math.cos(t2 / 2) ** 2
    assert abs(cond["+", "+"] - expected) <= TOL


def test_nonoptimal_half_purity_point():
    ov = sd.SourceOverlap(0.5, 0.3)
    jc = JointConfig.from_angles(math.pi / 2, 1.0, math.pi / 2, 0.7)  # phi1 - phi2 - delta = 0
    assert abs(sd.nonoptimal_conditionals(ov, jc)["+", "+"] - 0.25) <= TOL
    ref, _ = oracle.decohered_conditionals(ov, jc)
    assert abs(ref[0, 0] - 0.25) <= 1e-10


@settings(max_examples=200)
@given(unit_interval, st.floats(-math.pi, math.pi), polar, azimuth, polar, azimuth)
def test_nonoptimal_pairs_sum_to_one(mu, delta, t1, p1, t2, p2):
    cond = sd.nonoptimal_conditionals(sd.SourceOverlap(mu, delta), JointConfig.from_angles(t1, p1, t2, p2))
    assert abs(sum(cond.given_plus) - 1) <= TOL and abs(sum(cond.given_minus) - 1) <= TOL
    assert min(cond.given_plus + cond.given_minus) >= -TOL


def test_nonoptimal_matches_decoherence_oracle(rng):
    worst = 0.0
    for _ in range(1000):
        ov = sd.SourceOverlap(rng.uniform(), rng.uniform(-math.pi, math.pi))
        jc = random_joint_configs(rng, 1)[0]
        cond = sd.nonoptimal_conditionals(ov, jc)
        ref, marginal = oracle.decohered_conditionals(ov, jc)
        worst = max(worst, *(abs(cond[s, i] - ref["+-".index(s), "+-".index(i)]) for s, i in CELLS))
        worst = max(worst, np.max(np.abs(marginal - 0.5)))
    assert worst <= 1e-10


def test_environment_oracle_states_have_requested_overlap(rng):
    for _ in range(50):
        ov = sd.SourceOverlap(rng.uniform(), rng.uniform(-math.pi, math.pi))
        m, n = oracle.environment_states(ov)
        assert abs(np.vdot(m, n) - ov.value) <= TOL
        assert abs(np.linalg.norm(n) - 1) <= TOL


def test_marginal_flatness(rng):
    # summing the idler out leaves the source-level ensemble statistics
    source = sd.purity(sd.SourceModel.ideal_idler())
    for _ in range(1000):
        ov = sd.SourceOverlap(rng.uniform(), rng.uniform(-math.pi, math.pi))
        jc = random_joint_configs(rng, 1)[0]
        marg = sd.joint_distribution(ov, jc).signal_marginal()
        expected = sd.ensemble_probabilities(source, jc.alice.theta, jc.alice.phi)
        assert abs(marg[0] - expected[0]) <= TOL and abs(marg[1] - expected[1]) <= TOL


def test_joint_distribution_matches_oracle(rng):
    for _ in range(500):
        ov = sd.SourceOverlap(rng.uniform(), rng.uniform(-math.pi, math.pi))
        jc = random_joint_configs(rng, 1)[0]
        assert np.max(np.abs(sd.joint_distribution(ov, jc).as_array() - oracle.decohered_joint(ov, jc))) <= 1e-10


def test_subensemble_visibility_matches_phi_sweep():
    phis = np.linspace(0, 2 * math.pi, 2001)
    for mu, t1, t2, idler in [(0.5, math.pi / 2, math.pi / 2, "+"), (0.7, 1.0, 2.0, "-"), (1.0, 0.6, 1.4, "+")]:
        ov = sd.SourceOverlap(mu, 0.2)
        p = np.array([sd.nonoptimal_conditionals(ov, JointConfig.from_angles(t1, f, t2, 0.0))["+", idler] for f in phis])
        expected = sd.subensemble_visibility(ov, t1, t2, idler)
        assert abs((p.max() - p.min()) / (p.max() + p.min()) - expected) < 1e-6
    assert abs(sd.subensemble_visibility(sd.SourceOverlap(0.5), math.pi / 2, math.pi / 2) - 0.5) <= TOL
