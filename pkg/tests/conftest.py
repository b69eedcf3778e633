import math

import numpy as np
import pytest

from qkerr.fock import ModelParams, choose_cutoff

# oracle truncation: tight enough that high-order moments are not limited by the tail
ORACLE_EPS = 1e-20


def oracle_params(nu, m=0, theta=0.0, chi=5.0, min_cutoff=0):
    cutoff = max(choose_cutoff(nu, m, ORACLE_EPS), min_cutoff, m + 1)
    return ModelParams(chi=chi, nu=nu, theta=theta, m=m, cutoff=cutoff)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def close(a, b, rel=1e-9):
    return abs(a - b) <= rel * (1 + abs(b))


SQRT_HALF = math.sqrt(0.5)
