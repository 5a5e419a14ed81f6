import numpy as np
import pytest

import jacobiband as jb


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Compile the jitted kernels once so timed tests measure steady state."""
    jb.warm_up()


def tame_instance(rng, p=None):
    """Moderate random instance: couplings in [0.5, 2], diagonals in [-1, 1]."""
    if p is None:
        p = int(rng.integers(2, 9))
    a = np.exp(rng.uniform(np.log(0.5), np.log(2.0), p))
    b = rng.uniform(-1.0, 1.0, p)
    return jb.new_periodic_jacobi(a, b)


def wild_instance(rng, p=None):
    """Strongly oscillating instance: couplings span [1e-3, 1e3], b in [-10, 10]."""
    if p is None:
        p = int(rng.integers(2, 13))
    a = np.exp(rng.uniform(np.log(1e-3), np.log(1e3), p))
    b = rng.uniform(-10.0, 10.0, p)
    return jb.new_periodic_jacobi(a, b)
