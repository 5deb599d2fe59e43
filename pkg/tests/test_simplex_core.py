import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mlrt.exceptions import DomainError, ValidationError
from mlrt.models.distribution import Distribution
from mlrt.utils.halfspace import dual_objective, maximize_dual, min_kl_halfspace
from mlrt.utils.simplex_core import (
    bhattacharyya, chi_squared, kl, llr_gap, log_ratio, tilt, variance_under,
)
from tests.conftest import GAMMA_HALF, KL_12, KL_21, distinct_pairs, distributions


@pytest.mark.unit
class TestDivergences:
    """Test cases for the basic divergences."""

    def test_kl_hand_values(self):
        """Test kl against hand evaluation."""
        assert kl([0.9, 0.1], [0.2, 0.8]) == pytest.approx(1.145726, abs=1e-6)
        assert kl([0.2, 0.8], [0.9, 0.1]) == pytest.approx(1.362738, abs=1e-6)
        assert kl([0.2, 0.8], [0.9, 0.1]) == pytest.approx(KL_21, abs=1e-14)
        assert kl([0.9, 0.1], [0.2, 0.8]) == pytest.approx(KL_12, abs=1e-14)

    def test_kl_of_identical_is_zero(self):
        """Test kl(p, p) is exactly zero."""
        assert kl([0.3, 0.7], [0.3, 0.7]) == 0.0

    def test_kl_allows_boundary_first_argument(self):
        """Test 0 log 0 = 0 in the first argument."""
        assert kl([1.0, 0.0], [0.5, 0.5]) == pytest.approx(math.log(2.0), abs=1e-15)

    def test_kl_rejects_zero_second_argument(self):
        """Test a zero entry in the reference distribution is a domain error."""
        with pytest.raises(DomainError):
            kl([0.5, 0.5], [1.0, 0.0])

    def test_alphabet_mismatch(self):
        """Test vectors of different lengths are rejected."""
        with pytest.raises(ValidationError):
            kl([0.5, 0.5], [0.2, 0.3, 0.5])

    def test_bhattacharyya_half_log_two(self):
        """Test B(Bern(0.1), Bern(0.8)) = ln(2) / 2."""
        assert 2.0 * bhattacharyya([0.9, 0.1], [0.2, 0.8]) == pytest.approx(math.log(2.0),
                                                                           abs=1e-12)

    def test_chi_squared_examples(self):
        """Test chi-squared of the equal-slope tilt against both endpoints."""
        assert chi_squared([0.6, 0.4], [0.9, 0.1]) == pytest.approx(1.0, abs=1e-12)
        assert chi_squared([0.6, 0.4], [0.2, 0.8]) == pytest.approx(1.0, abs=1e-12)
        assert chi_squared([0.9, 0.1], [0.9, 0.1]) == 0.0

    def test_chi_squared_identity(self):
        """Test chi2(q || p) = sum q^2 / p - 1."""
        q, p = np.array([0.2, 0.5, 0.3]), np.array([0.4, 0.4, 0.2])
        assert chi_squared(q, p) == pytest.approx(float(np.sum(q ** 2 / p) - 1.0), abs=1e-12)

    def test_variance_under(self):
        """Test the variance of the log-likelihood ratio under p1."""
        c = log_ratio([0.9, 0.1], [0.2, 0.8])
        expected = 0.9 * math.log(4.5) ** 2 + 0.1 * math.log(0.125) ** 2 - KL_12 ** 2
        assert variance_under([0.9, 0.1], -c) == pytest.approx(expected, abs=1e-12)
        assert expected == pytest.approx(1.155745, abs=1e-6)

    @settings(max_examples=50, deadline=None)
    @given(distributions(), st.data())
    def test_kl_nonnegative(self, p, data):
        """Test kl(p, q) >= 0 with equality only at p = q."""
        q = data.draw(distributions(p.alphabet_size))
        assert kl(p, q) >= 0.0
        assert kl(p, p) <= 1e-10


@pytest.mark.unit
class TestLlrGap:
    """Test cases for the type statistic."""

    def test_llr_gap_at_p1_is_minus_kl(self):
        """Test llr_gap(p1, p1, p2) = -D(p1 || p2)."""
        assert llr_gap([0.9, 0.1], [0.9, 0.1], [0.2, 0.8]) == pytest.approx(-KL_12, abs=1e-14)

    def test_llr_gap_at_p2_is_kl(self):
        """Test llr_gap(p2, p1, p2) = D(p2 || p1)."""
        assert llr_gap([0.2, 0.8], [0.9, 0.1], [0.2, 0.8]) == pytest.approx(KL_21, abs=1e-14)

    def test_llr_gap_equal_slope_point(self):
        """Test the threshold of the equal-slope tilt."""
        assert llr_gap([0.6, 0.4], [0.9, 0.1], [0.2, 0.8]) == pytest.approx(-0.0706699, abs=1e-7)
        assert llr_gap([0.6, 0.4], [0.9, 0.1], [0.2, 0.8]) == pytest.approx(GAMMA_HALF)

    @settings(max_examples=40, deadline=None)
    @given(distinct_pairs(), st.floats(min_value=0.0, max_value=1.0), st.data())
    def test_llr_gap_is_affine(self, pair, alpha, data):
        """Test llr_gap is affine in its first argument."""
        p_hat1, p_hat2 = pair
        p = data.draw(distributions(p_hat1.alphabet_size))
        q = data.draw(distributions(p_hat1.alphabet_size))
        mix = alpha * p.probs + (1.0 - alpha) * q.probs
        expected = alpha * llr_gap(p, p_hat1, p_hat2) + (1.0 - alpha) * llr_gap(q, p_hat1,
                                                                                p_hat2)
        assert llr_gap(mix, p_hat1, p_hat2) == pytest.approx(expected, abs=1e-12)


@pytest.mark.unit
class TestTilt:
    """Test cases for the generalized tilt."""

    def test_tilt_endpoints(self):
        """Test the tilt reproduces p1 at lambda 0 and p2 at lambda 1."""
        p1, p2 = [0.9, 0.1], [0.2, 0.8]
        assert tilt(p1, p1, p2, 0.0).allclose(Distribution(p1), atol=1e-15)
        assert tilt(p1, p1, p2, 1.0).allclose(Distribution(p2), atol=1e-15)

    def test_tilt_half_is_geometric_mean(self):
        """Test the lambda = 1/2 tilt of Bern(0.1) toward Bern(0.8) is [0.6, 0.4]."""
        q = tilt([0.9, 0.1], [0.9, 0.1], [0.2, 0.8], 0.5)
        np.testing.assert_allclose(q.probs, [0.6, 0.4], atol=1e-15)

    def test_extreme_tilt_stays_positive(self):
        """Test very large lambda does not produce a zero entry."""
        q = tilt([0.5, 0.5], [0.9, 0.1], [0.2, 0.8], 1e4)
        assert np.all(q.probs > 0.0)
        assert q.probs[1] == pytest.approx(1.0)

    def test_non_finite_lambda_rejected(self):
        with pytest.raises(ValidationError):
            tilt([0.5, 0.5], [0.9, 0.1], [0.2, 0.8], math.inf)


@pytest.mark.unit
class TestHalfspace:
    """Test cases for the relative-entropy projection onto a half-space."""

    def test_feasible_base_is_its_own_projection(self, tolerance):
        """Test the projection of a point inside the half-space is the point."""
        c = log_ratio([0.9, 0.1], [0.2, 0.8])
        sol = min_kl_halfspace(Distribution([0.2, 0.8]), c, 0.0, tolerance)
        assert sol.exponent == 0.0
        assert sol.lam == 0.0
        assert sol.condition_holds is False

    def test_projection_is_active_tilt(self, tolerance):
        """Test the minimizer sits on the hyperplane."""
        c = log_ratio([0.9, 0.1], [0.2, 0.8])
        sol = min_kl_halfspace(Distribution([0.9, 0.1]), c, GAMMA_HALF, tolerance)
        assert sol.lam == pytest.approx(0.5, abs=1e-10)
        assert float(sol.q.probs @ c) == pytest.approx(GAMMA_HALF, abs=1e-10)

    def test_dual_matches_primal(self, tolerance):
        """Test the concave dual attains the primal value."""
        base = np.array([0.5, 0.3, 0.2])
        c = np.array([-1.0, 0.2, 0.9])
        sol = min_kl_halfspace(base, c, 0.4, tolerance)
        value, lam = maximize_dual(base, c, 0.4, tolerance)
        assert value == pytest.approx(sol.exponent, abs=1e-10)
        assert lam == pytest.approx(sol.lam, abs=1e-8)
        assert dual_objective(base, c, 0.4, lam + 0.1) <= value
