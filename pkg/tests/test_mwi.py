import math

import numpy as np
import pytest
from hypothesis import given

from conftest import azimuth, polar, random_joint_configs
from qeraser import epr, mwi
from qeraser.epr import JointConfig
from qeraser.qstate import TOL

R = 1 / math.sqrt(2)


@given(polar, azimuth)
def test_aligned_settings_leave_two_branches(theta, phi):
    u = mwi.evolve_universal(JointConfig.from_angles(theta, phi, theta, phi))
    amps = u.amplitudes()
    assert abs(amps["+", "+"]) <= TOL and abs(amps["-", "-"]) <= TOL
    assert amps[mwi.UNRESOLVED] == 0.0
    assert np.allclose(mwi.branch_frequencies(u).as_array(), [0, 0.5, 0.5, 0], atol=TOL)


def test_both_on_axis_amplitudes():
    amps = mwi.evolve_universal(JointConfig.from_angles(0.0, 0.3, 0.0, 1.2)).amplitudes()
    assert abs(abs(amps["+", "-"]) - R) <= TOL and abs(abs(amps["-", "+"]) - R) <= TOL
    assert abs(amps["+", "+"]) <= TOL and abs(amps["-", "-"]) <= TOL


def test_orthogonal_axes_give_uniform_branches():
    u = mwi.evolve_universal(JointConfig.from_angles(0.0, 0.0, math.pi / 2, 0.8))
    assert np.allclose(mwi.branch_frequencies(u).as_array(), 0.25, atol=TOL)


def test_norm_preserved_at_every_stage(rng):
    for jc in random_joint_configs(rng, 1000):
        for u in mwi.stages(jc):
            assert abs(u.norm() - 1) <= TOL


def test_state_not_final_is_rejected():
    jc = JointConfig.from_angles(1.0, 0.2, 2.0, 0.5)
    u0, u1, _ = mwi.stages(jc)
    for u in (u0, u1):
        with pytest.raises(mwi.StateNotFinalError):
            mwi.branch_frequencies(u)
    with pytest.raises(ValueError):
        mwi.register(u0)
    with pytest.raises(ValueError):
        mwi.interfere(u1, jc)


def test_copenhagen_agreement(rng):
    worst = 0.0
    for jc in random_joint_configs(rng, 10_000):
        branch = mwi.branch_frequencies(mwi.evolve_universal(jc)).as_array()
        worst = max(worst, np.max(np.abs(branch - epr.joint_distribution(jc).as_array())))
    assert worst <= TOL


def test_branch_amplitudes_match_closed_form_up_to_global_phase(rng):
    # amplitudes of the four branches: inner products of the rotated singlet with detector states
    from qeraser.interferometer import spinor_basis

    for jc in random_joint_configs(rng, 300):
        u = mwi.evolve_universal(jc)
        b1 = spinor_basis(jc.alice.theta, jc.alice.phi)
        b2 = spinor_basis(jc.bob.theta, jc.bob.phi)
        ref = np.array([np.vdot(np.kron(b1[a], b2[b]), epr.SINGLET) for a in (0, 1) for b in (0, 1)])
        got = np.array([u.amplitudes()[c] for c in epr.CELLS])
        assert abs(abs(np.vdot(ref, got)) - 1) <= TOL


def test_both_paths_persist_before_registration(rng):
    for jc in random_joint_configs(rng, 500):
        w = mwi.signal_path_weights(jc)
        assert abs(w.sum() - 1) <= TOL
        if 1e-6 < jc.alice.theta < math.pi - 1e-6:
            assert np.all(w > 0)
    w = mwi.signal_path_weights(JointConfig.from_angles(0.0, 0.0, 1.0, 0.0))
    assert w[0, 1] == 0.0 and w[1, 0] == 0.0
