"""
Mismatched likelihood ratio test exponents
The test is built from (p_hat1, p_hat2, gamma_hat) while data come from (p1, p2)
"""

import math
from enum import Enum
from typing import Optional, Tuple

import numpy as np
from scipy.stats import norm

from mlrt.exceptions import ValidationError
from mlrt.models.distribution import Distribution
from mlrt.models.exponents import ExponentPair, MismatchedResult, MismatchedTest, SteinReport
from mlrt.services.base_service import BaseService
from mlrt.services.lrt_exponents import LrtExponentService
from mlrt.utils.cancellation import CancellationToken
from mlrt.utils.halfspace import maximize_dual, min_kl_halfspace
from mlrt.utils.root_finding import grow_upper_bracket, solve_increasing
from mlrt.utils.simplex_core import kl, llr_gap, log_ratio, tilt, variance_under

ON_CURVE_TOLERANCE = 1e-6


class DualForm(str, Enum):
    """Which one-parameter dual to maximize.

    LAGRANGIAN tilts the generating distribution by the test statistic and is
    the dual of the primal program. PRINTED replaces the opposite test
    distribution by the opposite generating distribution inside the log-sum;
    it coincides with LAGRANGIAN only without mismatch.
    """

    LAGRANGIAN = 'lagrangian'
    PRINTED = 'printed'


class MismatchExponentService(BaseService):
    """Service for the exponents of a fixed mismatched LRT"""

    def __init__(self, tolerance=None, lrt_service: Optional[LrtExponentService] = None):
        super().__init__(tolerance)
        self.lrt = lrt_service or LrtExponentService(self.tol)

    def _exponent(self, p: Distribution, test: MismatchedTest,
                  token: Optional[CancellationToken] = None) -> MismatchedResult:
        self.require_same_alphabet(p=p, p_hat=test.p_hat1)
        test.require_distinct()
        sol = min_kl_halfspace(p, log_ratio(test.p_hat1, test.p_hat2), test.gamma_hat, self.tol,
                               token=token)
        return MismatchedResult(sol.exponent, sol.q, sol.lam, sol.condition_holds)

    def mismatched_exponent_1(self, p1: Distribution, test: MismatchedTest,
                              token: Optional[CancellationToken] = None) -> MismatchedResult:
        """min D(Q||p1) over the decide-2 region {Q : llr_gap(Q, p_hat1, p_hat2) >= gamma_hat}"""
        self.log_operation('mismatched_exponent_1', {'gamma_hat': test.gamma_hat})
        return self._exponent(p1, test, token)

    def mismatched_exponent_2(self, p2: Distribution, test: MismatchedTest,
                              token: Optional[CancellationToken] = None) -> MismatchedResult:
        """min D(Q||p2) over the decide-1 region, i.e. the first exponent of the swapped test"""
        self.log_operation('mismatched_exponent_2', {'gamma_hat': test.gamma_hat})
        return self._exponent(p2, test.swapped(), token)

    def mismatched_exponents(self, p1: Distribution, p2: Distribution,
                             test: MismatchedTest) -> Tuple[ExponentPair, Tuple[bool, bool]]:
        """Both exponents and whether each tilt condition holds (False: exponent is 0)"""
        r1 = self.mismatched_exponent_1(p1, test)
        r2 = self.mismatched_exponent_2(p2, test)
        pair = ExponentPair(e1=r1.exponent, e2=r2.exponent, q1=r1.q, q2=r2.q, lambda1=r1.lam,
                            lambda2=r2.lam, gamma=test.gamma_hat)
        return pair, (r1.condition_holds, r2.condition_holds)

    def mismatched_dual_1(self, p1: Distribution, test: MismatchedTest,
                          form: DualForm = DualForm.LAGRANGIAN,
                          p2: Optional[Distribution] = None) -> float:
        """max over lambda >= 0 of lambda*gamma_hat - log sum p1 p_hat1^-lambda x^lambda

        x is p_hat2 for the Lagrangian form and p2 for the printed form.
        """
        self.require_same_alphabet(p1=p1, p_hat1=test.p_hat1)
        test.require_distinct()
        if form == DualForm.PRINTED:
            other = self._require_other(p2, 'p2')
            direction = log_ratio(test.p_hat1, other)
        else:
            direction = log_ratio(test.p_hat1, test.p_hat2)
        value, _ = maximize_dual(p1, direction, test.gamma_hat, self.tol)
        return max(0.0, value)

    def mismatched_dual_2(self, p2: Distribution, test: MismatchedTest,
                          form: DualForm = DualForm.LAGRANGIAN,
                          p1: Optional[Distribution] = None) -> float:
        """max over lambda >= 0 of -lambda*gamma_hat - log sum p2 p_hat2^-lambda x^lambda

        x is p_hat1 for the Lagrangian form and p1 for the printed form.
        """
        self.require_same_alphabet(p2=p2, p_hat2=test.p_hat2)
        test.require_distinct()
        if form == DualForm.PRINTED:
            other = self._require_other(p1, 'p1')
            direction = log_ratio(test.p_hat2, other)
        else:
            direction = log_ratio(test.p_hat2, test.p_hat1)
        value, _ = maximize_dual(p2, direction, -test.gamma_hat, self.tol)
        return max(0.0, value)

    @staticmethod
    def _require_other(dist: Optional[Distribution], name: str) -> Distribution:
        if dist is None:
            raise ValidationError(f"the printed dual form needs {name}", field=name)
        return dist

    @staticmethod
    def refit_lambda(p: Distribution, test: MismatchedTest, q: Distribution) -> float:
        """Least-squares tilt parameter of q relative to p along the test statistic"""
        c = log_ratio(test.p_hat1, test.p_hat2)
        c = c - c.mean()
        if not np.any(c):
            return 0.0
        log_w = np.log(q.probs) - np.log(p.probs)
        return float((log_w - log_w.mean()) @ c / (c @ c))

    def on_matched_tradeoff(self, p1: Distribution, p2: Distribution,
                            test: MismatchedTest) -> Tuple[ExponentPair, bool]:
        """Whether the mismatched exponent pair lies on the matched LRT tradeoff curve"""
        if p1 == p2:
            raise ValidationError("p1 and p2 must differ", field='p2')
        point, _ = self.mismatched_exponents(p1, p2, test)

        if point.e1 <= self.tol.abs_tol:
            # every E2 >= D(p1||p2) is reached by a matched test with E1 = 0
            return point, point.e2 >= kl(p1, p2) - ON_CURVE_TOLERANCE
        if not math.isfinite(point.e1) or not math.isfinite(point.e2):
            return point, False

        c = log_ratio(p1, p2)
        # D(Q_lambda || p1) increases with lambda >= 0
        def e1_at(lam: float) -> float:
            return kl(tilt(p1, p1, p2, lam), p1)

        lo, hi = grow_upper_bracket(e1_at, point.e1, label='matched lambda')
        lam = solve_increasing(e1_at, point.e1, lo, hi, self.tol, residual_tol=1e-9,
                               label='matched lambda')
        gamma = float(tilt(p1, p1, p2, lam).probs @ c)
        matched = self.lrt.matched_exponents(p1, p2, gamma)
        on_curve = abs(matched.e2 - point.e2) <= ON_CURVE_TOLERANCE
        self.logger.debug("matched curve at gamma=%.12g: E2=%.12g vs %.12g", gamma, matched.e2,
                          point.e2)
        return point, on_curve

    def tilted_pair_tradeoff_check(self, p1: Distribution, p2: Distribution,
                                   lambda_a: float, lambda_b: float,
                                   gamma_hat: float) -> Tuple[ExponentPair, bool]:
        """Test distributions drawn from the tilted family of (p1, p2) keep the LRT optimal"""
        self.validate_field_range('lambda_a', lambda_a, 0.0, 1.0)
        self.validate_field_range('lambda_b', lambda_b, 0.0, 1.0)
        if not lambda_a < lambda_b:
            raise ValidationError("lambda_a must be smaller than lambda_b", field='lambda_a',
                                  value=lambda_a)
        test = MismatchedTest(tilt(p1, p1, p2, lambda_a), tilt(p1, p1, p2, lambda_b), gamma_hat)
        return self.on_matched_tradeoff(p1, p2, test)

    def llr_variance(self, p1: Distribution, test: MismatchedTest) -> float:
        """Var under p1 of the per-symbol statistic"""
        self.require_same_alphabet(p1=p1, p_hat1=test.p_hat1)
        return variance_under(p1, log_ratio(test.p_hat1, test.p_hat2))

    def stein_threshold(self, p1: Distribution, test_dists: Tuple[Distribution, Distribution],
                        epsilon: float, n: int, allow_half: bool = False
                        ) -> Tuple[float, float, float]:
        """Threshold that holds the type-I error near epsilon at length n.

        Returns (threshold, c_hat2, variance). epsilon = 1/2 is accepted only with
        allow_half, giving c_hat2 = 0.
        """
        self._validate_epsilon(epsilon, allow_half)
        if int(n) != n or n < 1:
            raise ValidationError("n must be a positive integer", field='n', value=n)
        p_hat1, p_hat2 = test_dists
        test = MismatchedTest(p_hat1, p_hat2, 0.0)
        variance = self.llr_variance(p1, test)
        c_hat2 = float(-math.sqrt(variance) * norm.ppf(epsilon))
        threshold = llr_gap(p1, p_hat1, p_hat2) + c_hat2 / math.sqrt(n)
        return threshold, c_hat2, variance

    @staticmethod
    def _validate_epsilon(epsilon: float, allow_half: bool) -> None:
        upper_ok = epsilon <= 0.5 if allow_half else epsilon < 0.5
        if not (0.0 < epsilon and upper_ok):
            bound = "(0, 1/2]" if allow_half else "(0, 1/2)"
            raise ValidationError(f"epsilon must lie in {bound}", field='epsilon', value=epsilon)

    def stein_mismatched(self, p1: Distribution, p2: Distribution,
                         test_dists: Tuple[Distribution, Distribution], epsilon: float,
                         n: int) -> SteinReport:
        """Type-II exponent of the mismatched test whose type-I error is held at epsilon"""
        self.log_operation('stein_mismatched', {'epsilon': epsilon, 'n': n})
        threshold, c_hat2, variance = self.stein_threshold(p1, test_dists, epsilon, n)
        limiting = llr_gap(p1, *test_dists)
        result = self.mismatched_exponent_2(p2, MismatchedTest(*test_dists, limiting))
        return SteinReport(threshold=threshold, exponent=result.exponent, variance=variance,
                           c_hat2=c_hat2, limiting_threshold=limiting, epsilon=epsilon, n=int(n))

    def bayes_exponent(self, p1: Distribution, p2: Distribution, test: MismatchedTest) -> float:
        """Exponent of the average error for fixed priors: min(E1, E2)"""
        pair, _ = self.mismatched_exponents(p1, p2, test)
        return pair.bayes
