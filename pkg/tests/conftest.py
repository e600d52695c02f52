import numpy as np
import pytest

from diracjost.jost import compute_jost
from diracjost.profiles import CoefficientProfile
from diracjost.spectrum import find_eigenvalues
from diracjost.verify import random_profile

SUITE_SEED = 7
SUITE_SIZE = 25


def scalar_profile(p1: float, q1: float = 0.0) -> CoefficientProfile:
    """m = 1, N0 = 1 profile with a single site perturbation."""
    return CoefficientProfile(
        m=1,
        N0=1,
        A=(np.eye(1), np.eye(1)),
        B=(-np.eye(1),),
        P=(np.array([[p1]]),),
        Q=(np.array([[q1]]),),
    )


@pytest.fixture(scope="session")
def suite_profiles():
    rng = np.random.default_rng(SUITE_SEED)
    return [random_profile(rng) for _ in range(SUITE_SIZE)]


@pytest.fixture(scope="session")
def suite_series(suite_profiles):
    return [(p, compute_jost(p)) for p in suite_profiles]


@pytest.fixture(scope="session")
def suite_searches(suite_series):
    return [(p, s, find_eigenvalues(s, p)) for p, s in suite_series]
