import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


def rand_complex(rng, shape):
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


def rand_regular(rng, n=2, min_det=1e-2):
    while True:
        m = rand_complex(rng, (n, n))
        if abs(np.linalg.det(m)) > min_det:
            return m


def rand_unitary(rng, n=2):
    q, r = np.linalg.qr(rand_complex(rng, (n, n)))
    return q * (np.diag(r) / np.abs(np.diag(r)))
