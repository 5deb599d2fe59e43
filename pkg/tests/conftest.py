import math
import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import assume
from hypothesis import strategies as st

# Add the project root to Python path
sys.path.insert(0, str(Path(__file__).parent.parent))

from mlrt.models.distribution import Distribution
from mlrt.models.tolerance import ToleranceConfig
from mlrt.services.lrt_exponents import LrtExponentService
from mlrt.services.mismatch_exponents import MismatchExponentService
from mlrt.services.oracle import OracleService
from mlrt.services.sensitivity import SensitivityService
from mlrt.services.worst_case import WorstCaseService
from mlrt.utils.simplex_core import kl

# hand-evaluated values for Bern(0.1) against Bern(0.8)
KL_12 = 0.9 * math.log(4.5) + 0.1 * math.log(0.125)
KL_21 = 0.2 * math.log(0.2 / 0.9) + 0.8 * math.log(8.0)
E1_HALF = 0.6 * math.log(0.6 / 0.9) + 0.4 * math.log(4.0)
E2_HALF = 0.6 * math.log(3.0) + 0.4 * math.log(0.5)
GAMMA_HALF = 0.6 * math.log(0.2 / 0.9) + 0.4 * math.log(8.0)


@pytest.fixture(scope="session")
def tolerance():
    """Default solver tolerances."""
    return ToleranceConfig()


@pytest.fixture(scope="function")
def lrt_service(tolerance):
    return LrtExponentService(tolerance)


@pytest.fixture(scope="function")
def mismatch_service(tolerance, lrt_service):
    return MismatchExponentService(tolerance, lrt_service)


@pytest.fixture(scope="function")
def worst_case_service(tolerance):
    return WorstCaseService(tolerance)


@pytest.fixture(scope="function")
def sensitivity_service(tolerance, lrt_service):
    return SensitivityService(tolerance, lrt_service, workers=2)


@pytest.fixture(scope="function")
def oracle_service(tolerance):
    return OracleService(tolerance, workers=2)


@pytest.fixture(scope="function")
def bern_pair():
    """Bern(0.1) and Bern(0.8) as [P(0), P(1)]."""
    return Distribution([0.9, 0.1]), Distribution([0.2, 0.8])


@pytest.fixture(scope="function")
def mismatched_binary():
    """Generating pair and a mismatched binary test pair."""
    return {
        'p1': Distribution([0.9, 0.1]),
        'p2': Distribution([0.2, 0.8]),
        'p_hat1': Distribution([0.8, 0.2]),
        'p_hat2': Distribution([0.3, 0.7]),
    }


@pytest.fixture(scope="function")
def ternary_instance():
    """Ternary pair whose log-likelihood ratio is not affine in the test statistic."""
    return {
        'p1': Distribution([0.5, 0.3, 0.2]),
        'p2': Distribution([0.2, 0.3, 0.5]),
        'p_hat1': Distribution([0.5, 0.2, 0.3]),
        'p_hat2': Distribution([0.2, 0.5, 0.3]),
    }


# hypothesis strategies

@st.composite
def distributions(draw, alphabet_size=None, min_mass=0.02):
    """Strictly positive distributions with every entry at least min_mass / k."""
    k = alphabet_size or draw(st.sampled_from([2, 3, 5]))
    weights = draw(st.lists(st.floats(min_value=0.05, max_value=1.0), min_size=k, max_size=k))
    w = np.asarray(weights)
    w = w / w.sum()
    w = (1.0 - min_mass) * w + min_mass / k
    return Distribution(w / w.sum())


@st.composite
def distinct_pairs(draw, alphabet_size=None):
    """Two distributions on a common alphabet, clearly apart."""
    k = alphabet_size or draw(st.sampled_from([2, 3, 5]))
    p = draw(distributions(k))
    q = draw(distributions(k))
    if kl(p, q) < 1e-3:
        q = Distribution(np.roll(q.probs, 1)) if k > 2 else Distribution(q.probs[::-1])
    assume(kl(p, q) >= 1e-3)
    return p, q
