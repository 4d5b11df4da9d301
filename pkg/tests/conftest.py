import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


def random_orthonormal(rng, m, k, complex_=True):
    A = rng.standard_normal((m, k))
    if complex_:
        A = A + 1j * rng.standard_normal((m, k))
    Q, _ = np.linalg.qr(A)
    return Q
