import math

import numpy as np
import pytest
from hypothesis import strategies as st

from qeraser.epr import JointConfig

polar = st.floats(0.0, math.pi, allow_nan=False)
azimuth = st.floats(0.0, 2 * math.pi, allow_nan=False)
unit_interval = st.floats(0.0, 1.0, allow_nan=False)


def random_state(rng, dim=2):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_unitary(rng):
    # QR of a complex Gaussian matrix, phases fixed by R's diagonal
    z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_density(rng, dim):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


def random_joint_configs(rng, n):
    t = rng.uniform(0, math.pi, size=(n, 2))
    p = rng.uniform(0, 2 * math.pi, size=(n, 2))
    return [JointConfig.from_angles(t[k, 0], p[k, 0], t[k, 1], p[k, 1]) for k in range(n)]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
