import math

import numpy as np
import pytest
from scipy.optimize import brentq

from mlrt.exceptions import SolveCancelledError, UnboundedLambdaError, ValidationError
from mlrt.models.distribution import Distribution
from mlrt.models.exponents import MismatchedTest
from mlrt.models.oracle import GridSpec
from mlrt.models.robust import Direction, KlBall, WorstCaseStatus
from mlrt.services.mismatch_exponents import MismatchExponentService
from mlrt.utils.cancellation import CancellationToken
from mlrt.utils.simplex_core import kl, llr_gap, log_ratio, tilt

P_HAT1 = Distribution([0.9, 0.1])
P_HAT2 = Distribution([0.2, 0.8])


def sample_ball(center: Distribution, radius: float, count: int, seed: int):
    """Random members of B(center, radius) from mixtures with Dirichlet draws."""
    rng = np.random.default_rng(seed)
    found = []
    while len(found) < count:
        u = rng.dirichlet(np.ones(center.alphabet_size))
        t = rng.uniform(0.0, 0.3)
        p = Distribution((1.0 - t) * center.probs + t * u)
        if kl(center, p) <= radius:
            found.append(p)
    return found


@pytest.mark.unit
class TestBallExtreme:
    """Test cases for extremizing the test statistic over a divergence ball."""

    def test_zero_radius(self, worst_case_service):
        extreme = worst_case_service.ball_llr_extreme((P_HAT1, P_HAT2), KlBall(P_HAT1, 0.0))
        assert extreme.value == pytest.approx(llr_gap(P_HAT1, P_HAT1, P_HAT2), abs=1e-15)
        assert extreme.argmax == P_HAT1
        assert not extreme.boundary

    def test_constant_statistic(self, worst_case_service):
        """Test identical test distributions give a flat objective."""
        extreme = worst_case_service.ball_llr_extreme((P_HAT1, P_HAT1), KlBall(P_HAT2, 0.3))
        assert extreme.value == 0.0

    @pytest.mark.parametrize("direction", [Direction.MAX, Direction.MIN])
    def test_binary_extreme_matches_closed_form(self, worst_case_service, direction):
        """Test the binary extreme sits where D(center || P) = R on the correct side."""
        radius = 0.01
        c = log_ratio(P_HAT1, P_HAT2)

        def gap(t):
            return kl(P_HAT1, [1.0 - t, t]) - radius

        t = brentq(gap, 0.1, 1.0 - 1e-12) if direction == Direction.MAX else brentq(
            gap, 1e-12, 0.1)
        expected = (1.0 - t) * c[0] + t * c[1]
        extreme = worst_case_service.ball_llr_extreme((P_HAT1, P_HAT2), KlBall(P_HAT1, radius),
                                                      direction)
        assert extreme.value == pytest.approx(expected, abs=1e-8)
        assert kl(P_HAT1, extreme.argmax) == pytest.approx(radius, abs=1e-9)

    def test_ternary_extreme_on_ball_surface(self, worst_case_service, ternary_instance):
        center = ternary_instance['p_hat1']
        dists = (ternary_instance['p_hat1'], ternary_instance['p_hat2'])
        low = worst_case_service.ball_llr_extreme(dists, KlBall(center, 0.02), Direction.MIN)
        high = worst_case_service.ball_llr_extreme(dists, KlBall(center, 0.02), Direction.MAX)
        assert low.value < llr_gap(center, *dists) < high.value
        assert kl(center, high.argmax) == pytest.approx(0.02, abs=1e-9)
        for p in sample_ball(center, 0.02, 50, seed=3):
            assert low.value - 1e-12 <= llr_gap(p, *dists) <= high.value + 1e-12

    def test_tied_maximizers_reach_face(self, worst_case_service):
        """Test a ball containing the face of tied maximizing symbols returns that face."""
        p_hat1, p_hat2 = Distribution([0.25, 0.25, 0.5]), Distribution([0.4, 0.4, 0.2])
        extreme = worst_case_service.ball_llr_extreme((p_hat1, p_hat2), KlBall(p_hat1, 1.0))
        assert extreme.boundary
        assert extreme.value == pytest.approx(math.log(1.6), abs=1e-10)
        np.testing.assert_allclose(extreme.argmax.probs, [0.5, 0.5, 0.0], atol=1e-11)

        inside = worst_case_service.ball_llr_extreme((p_hat1, p_hat2), KlBall(p_hat1, 0.5))
        assert not inside.boundary
        assert inside.value < math.log(1.6)
        assert kl(p_hat1, inside.argmax) == pytest.approx(0.5, abs=1e-9)

    def test_is_in_ball(self, worst_case_service):
        ball = KlBall(P_HAT1, 0.01)
        assert worst_case_service.is_in_ball(ball, P_HAT1)
        assert not worst_case_service.is_in_ball(ball, P_HAT2)
        with pytest.raises(ValidationError):
            worst_case_service.is_in_ball(ball, Distribution([0.2, 0.3, 0.5]))


@pytest.mark.unit
class TestWorstCaseExponents:
    """Test cases for the least-favorable exponents."""

    def test_zero_radius_reduces_to_mismatched(self, worst_case_service, mismatch_service):
        test = MismatchedTest(P_HAT1, P_HAT2, 0.0)
        sol1 = worst_case_service.worst_case_exponent_1(P_HAT1, P_HAT2, 0.0, 0.0)
        sol2 = worst_case_service.worst_case_exponent_2(P_HAT1, P_HAT2, 0.0, 0.0)
        assert sol1.exponent == pytest.approx(
            mismatch_service.mismatched_exponent_1(P_HAT1, test).exponent, abs=1e-9)
        assert sol2.exponent == pytest.approx(
            mismatch_service.mismatched_exponent_2(P_HAT2, test).exponent, abs=1e-9)
        assert sol1.status == WorstCaseStatus.INTERIOR
        assert sol1.p_least == P_HAT1

    @pytest.mark.parametrize("hypothesis", [1, 2])
    def test_kkt_residuals(self, worst_case_service, hypothesis):
        """Test the interior solution satisfies the tilt, mixture and active constraints."""
        solve = (worst_case_service.worst_case_exponent_1 if hypothesis == 1
                 else worst_case_service.worst_case_exponent_2)
        sol = solve(P_HAT1, P_HAT2, 0.0, 0.005)
        assert sol.status == WorstCaseStatus.INTERIOR
        assert sol.hypothesis == hypothesis
        for name in ('threshold', 'radius', 'mixture', 'tilt'):
            assert abs(sol.residuals[name]) <= 1e-7, name

        center, anchors = (P_HAT1, (P_HAT1, P_HAT2)) if hypothesis == 1 else (P_HAT2,
                                                                                (P_HAT2, P_HAT1))
        assert kl(center, sol.p_least) == pytest.approx(0.005, abs=1e-7)
        assert sol.exponent == pytest.approx(kl(sol.q_opt, sol.p_least), abs=1e-8)
        np.testing.assert_allclose(sol.p_least.probs,
                                   sol.beta * sol.q_opt.probs + (1.0 - sol.beta) * center.probs,
                                   atol=1e-8)
        np.testing.assert_allclose(tilt(sol.p_least, *anchors, sol.lam).probs, sol.q_opt.probs,
                                   atol=1e-8)
        assert 0.0 <= sol.beta <= 1.0

    def test_nonincreasing_in_radius(self, worst_case_service):
        radii = [0.0, 0.001, 0.005, 0.01, 0.05, 0.1]
        for solve in (worst_case_service.worst_case_exponent_1,
                      worst_case_service.worst_case_exponent_2):
            values = [solve(P_HAT1, P_HAT2, 0.0, r).exponent for r in radii]
            assert np.all(np.diff(values) <= 1e-12)
            assert values[-1] < values[0]

    @pytest.mark.parametrize("instance", ['binary', 'ternary'])
    def test_sandwich(self, worst_case_service, ternary_instance, instance):
        """Test every generating distribution in the ball does at least as well."""
        if instance == 'binary':
            p_hat1, p_hat2, radius = P_HAT1, P_HAT2, 0.005
        else:
            p_hat1, p_hat2, radius = ternary_instance['p_hat1'], ternary_instance['p_hat2'], 0.01
        test = MismatchedTest(p_hat1, p_hat2, 0.0)
        worst = worst_case_service.worst_case_exponent_1(p_hat1, p_hat2, 0.0, radius)
        assert worst.status == WorstCaseStatus.INTERIOR
        service = MismatchExponentService()
        for p in sample_ball(p_hat1, radius, 100, seed=11):
            assert service.mismatched_exponent_1(p, test).exponent >= worst.exponent - 1e-7

    def test_least_favorable_is_worst(self, worst_case_service, mismatch_service):
        """Test the mismatched exponent at the least favorable P equals the worst case."""
        sol = worst_case_service.worst_case_exponent_1(P_HAT1, P_HAT2, 0.0, 0.01)
        test = MismatchedTest(P_HAT1, P_HAT2, 0.0)
        assert mismatch_service.mismatched_exponent_1(sol.p_least, test).exponent == pytest.approx(
            sol.exponent, abs=1e-8)

    def test_zero_exponent_beyond_critical_radius(self, worst_case_service, mismatch_service):
        """Test a ball reaching the decision region gives a zero exponent and its witness."""
        sol = worst_case_service.worst_case_exponent_1(P_HAT1, P_HAT2, 0.0, 1.0)
        assert sol.status == WorstCaseStatus.ZERO_EXPONENT
        assert sol.exponent == 0.0
        assert kl(P_HAT1, sol.p_least) <= 1.0 + 1e-9
        test = MismatchedTest(P_HAT1, P_HAT2, 0.0)
        assert mismatch_service.mismatched_exponent_1(sol.p_least, test).exponent == 0.0

    def test_degenerate_center(self, worst_case_service):
        """Test identical test distributions give 0 or infinity by the threshold sign."""
        low = worst_case_service.worst_case_exponent_1(P_HAT1, P_HAT1, -0.1, 0.01)
        assert low.status == WorstCaseStatus.CENTER_DEGENERATE
        assert low.exponent == 0.0
        high = worst_case_service.worst_case_exponent_1(P_HAT1, P_HAT1, 0.1, 0.01)
        assert high.exponent == math.inf
        assert high.q_opt is None

    def test_unreachable_threshold(self, worst_case_service):
        with pytest.raises(UnboundedLambdaError):
            worst_case_service.worst_case_exponent_1(P_HAT1, P_HAT2, 5.0, 0.01)

    def test_negative_radius(self, worst_case_service):
        with pytest.raises(ValidationError):
            worst_case_service.worst_case_exponent_1(P_HAT1, P_HAT2, 0.0, -0.01)

    def test_cancelled_solve(self, worst_case_service):
        token = CancellationToken()
        token.cancel()
        with pytest.raises(SolveCancelledError):
            worst_case_service.worst_case_exponent_1(P_HAT1, P_HAT2, 0.0, 0.005, token=token)

    def test_tradeoff_rows(self, worst_case_service):
        rows = worst_case_service.worst_case_tradeoff(P_HAT1, P_HAT2, 0.001, 0.001,
                                                      [-0.5, 0.0, 0.5])
        assert [row[0] for row in rows] == [-0.5, 0.0, 0.5]
        e1 = [row[1] for row in rows]
        e2 = [row[2] for row in rows]
        assert e1 == sorted(e1)
        assert e2 == sorted(e2, reverse=True)


@pytest.mark.unit
class TestCriticalRadius:
    """Test cases for the radius at which the worst-case exponent vanishes."""

    def test_binary_critical_radius(self, worst_case_service):
        """Test the feasibility crossing brackets the critical radius."""
        radius = worst_case_service.critical_radius(P_HAT1, P_HAT2, 0.0, hypothesis=1)
        assert 0.0 < radius < math.inf
        dists = (P_HAT1, P_HAT2)
        below = worst_case_service.ball_llr_extreme(dists, KlBall(P_HAT1, radius - 1e-6))
        above = worst_case_service.ball_llr_extreme(dists, KlBall(P_HAT1, radius + 1e-6))
        assert below.value < 0.0 <= above.value
        # binary ball boundary at Q(1) = log(4.5) / log(36)
        t = math.log(4.5) / math.log(36.0)
        assert radius == pytest.approx(kl(P_HAT1, [1.0 - t, t]), abs=1e-8)

    def test_zero_when_center_already_decides(self, worst_case_service):
        gamma_hat = llr_gap(P_HAT1, P_HAT1, P_HAT2)
        assert worst_case_service.critical_radius(P_HAT1, P_HAT2, gamma_hat) == 0.0

    def test_infinite_when_threshold_unreachable(self, worst_case_service):
        assert worst_case_service.critical_radius(P_HAT1, P_HAT2, 5.0) == math.inf

    def test_exponent_vanishes_past_critical_radius(self, worst_case_service):
        radius = worst_case_service.critical_radius(P_HAT1, P_HAT2, 0.0, hypothesis=2)
        assert worst_case_service.worst_case_exponent_2(P_HAT1, P_HAT2, 0.0,
                                                        radius * 1.01).exponent == 0.0
        assert worst_case_service.worst_case_exponent_2(P_HAT1, P_HAT2, 0.0,
                                                        radius * 0.9).exponent > 0.0

    def test_invalid_hypothesis(self, worst_case_service):
        with pytest.raises(ValidationError):
            worst_case_service.critical_radius(P_HAT1, P_HAT2, 0.0, hypothesis=3)


@pytest.mark.slow
@pytest.mark.oracle
class TestWorstCaseAgainstGrid:
    """Test cases comparing the worst-case solver with the joint grid search."""

    @pytest.mark.parametrize("hypothesis", [1, 2])
    @pytest.mark.parametrize("radius", [0.001, 0.005, 0.01])
    def test_binary_grid(self, worst_case_service, oracle_service, hypothesis, radius):
        solve = (worst_case_service.worst_case_exponent_1 if hypothesis == 1
                 else worst_case_service.worst_case_exponent_2)
        exact = solve(P_HAT1, P_HAT2, 0.0, radius).exponent
        grid = oracle_service.grid_worst_case(P_HAT1, P_HAT2, 0.0, radius, hypothesis,
                                              GridSpec(100_001))
        assert grid.value == pytest.approx(exact, abs=1e-4)
        assert grid.value >= exact - 1e-9

    def test_grid_zero_radius(self, oracle_service, mismatch_service):
        test = MismatchedTest(P_HAT1, P_HAT2, 0.0)
        grid = oracle_service.grid_worst_case(P_HAT1, P_HAT2, 0.0, 0.0, 1, GridSpec(2001))
        assert grid.value == pytest.approx(
            mismatch_service.mismatched_exponent_1(P_HAT1, test).exponent, abs=1e-9)
