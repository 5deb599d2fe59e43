"""
Matched likelihood ratio test exponents
Primal (relative-entropy projection) and dual (concave one-parameter) forms
"""

import math
from typing import List, Tuple

import numpy as np

from mlrt.exceptions import ThresholdRangeError, UnboundedLambdaError, ValidationError
from mlrt.models.distribution import Distribution
from mlrt.models.exponents import ExponentPair, ThresholdRange
from mlrt.services.base_service import BaseService
from mlrt.utils.halfspace import maximize_dual, min_kl_halfspace, tilted_mean
from mlrt.utils.root_finding import solve_increasing
from mlrt.utils.simplex_core import bhattacharyya, kl, llr_gap, log_ratio, tilt


class LrtExponentService(BaseService):
    """Service for the exponents of the LRT built from the true distributions"""

    def threshold_range(self, p1: Distribution, p2: Distribution) -> ThresholdRange:
        """[-D(p1||p2), D(p2||p1)]: thresholds whose minimizer is a tilt with lambda in [0, 1]"""
        self.require_same_alphabet(p1=p1, p2=p2)
        return ThresholdRange(lo=-kl(p1, p2), hi=kl(p2, p1))

    def solve_lambda_matched(self, p1: Distribution, p2: Distribution, gamma: float) -> float:
        """Invert gamma = llr_gap(Q_lambda, p1, p2) on the geodesic between p1 and p2"""
        rng = self.threshold_range(p1, p2)
        if p1 == p2:
            raise ValidationError("p1 and p2 must differ", field='p2')
        if gamma < rng.lo:
            raise ThresholdRangeError(f"threshold {gamma!r} is below -D(p1||p2) = {rng.lo!r}",
                                      endpoint='lower', bound=rng.lo, value=gamma)
        if gamma > rng.hi:
            raise ThresholdRangeError(f"threshold {gamma!r} is above D(p2||p1) = {rng.hi!r}",
                                      endpoint='upper', bound=rng.hi, value=gamma)

        c = log_ratio(p1, p2)
        base = p1.probs

        def mean_at(lam: float) -> float:
            return tilted_mean(base, c, lam)

        # the endpoints are reached exactly by the tilt up to rounding
        if gamma == rng.lo:
            return 0.0
        if gamma == rng.hi or gamma >= mean_at(1.0):
            return 1.0
        return solve_increasing(mean_at, gamma, 0.0, 1.0, self.tol)

    def matched_exponents(self, p1: Distribution, p2: Distribution, gamma: float) -> ExponentPair:
        """(E1, E2) of the LRT with threshold gamma; every real gamma is handled"""
        self.log_operation('matched_exponents', {'gamma': gamma})
        rng = self.threshold_range(p1, p2)

        if rng.contains(gamma):
            lam = 0.0 if p1 == p2 else self.solve_lambda_matched(p1, p2, gamma)
            q = tilt(p1, p1, p2, lam)
            return ExponentPair(e1=kl(q, p1), e2=kl(q, p2), q1=q, q2=q, lambda1=lam,
                                lambda2=1.0 - lam, gamma=gamma)

        c = log_ratio(p1, p2)
        if gamma < rng.lo:
            e2, q2, lam2 = self._one_sided(p2, -c, -gamma)
            return ExponentPair(e1=0.0, e2=e2, q1=p1, q2=q2, lambda1=0.0, lambda2=lam2,
                                gamma=gamma)
        e1, q1, lam1 = self._one_sided(p1, c, gamma)
        return ExponentPair(e1=e1, e2=0.0, q1=q1, q2=p2, lambda1=lam1, lambda2=0.0, gamma=gamma)

    def _one_sided(self, base: Distribution, direction: np.ndarray, threshold: float):
        try:
            sol = min_kl_halfspace(base, direction, threshold, self.tol)
        except UnboundedLambdaError:
            # half-space meets the simplex at most on its boundary
            return math.inf, None, math.inf
        return sol.exponent, sol.q, sol.lam

    def dual_exponent_1(self, p1: Distribution, p2: Distribution, gamma: float) -> float:
        """max over lambda >= 0 of lambda*gamma - log sum p1^(1-lambda) p2^lambda"""
        in_range = self.threshold_range(p1, p2).contains(gamma)
        return self._dual(p1, log_ratio(p1, p2), gamma, in_range)

    def dual_exponent_2(self, p1: Distribution, p2: Distribution, gamma: float) -> float:
        """max over lambda >= 0 of -lambda*gamma - log sum p1^lambda p2^(1-lambda)"""
        in_range = self.threshold_range(p1, p2).contains(gamma)
        return self._dual(p2, log_ratio(p2, p1), -gamma, in_range)

    def _dual(self, base: Distribution, direction: np.ndarray, threshold: float,
              in_range: bool) -> float:
        cap = 1.0 if in_range else None
        try:
            value, _ = maximize_dual(base, direction, threshold, self.tol, cap=cap)
        except UnboundedLambdaError:
            return math.inf
        return max(0.0, value)

    def stein_matched(self, p1: Distribution, p2: Distribution) -> float:
        """Best type-II exponent with the type-I error held at a constant: D(p1||p2)"""
        self.require_same_alphabet(p1=p1, p2=p2)
        return kl(p1, p2)

    def tradeoff_curve(self, p1: Distribution, p2: Distribution,
                       points: int = 50) -> List[ExponentPair]:
        """Matched (E1, E2) pairs on a uniform grid over the closed threshold range"""
        self.validate_field_range('points', points, min_value=2)
        rng = self.threshold_range(p1, p2)
        return [self.matched_exponents(p1, p2, float(g))
                for g in np.linspace(rng.lo, rng.hi, int(points))]

    def min_sum_exponent(self, p1: Distribution,
                         p2: Distribution) -> Tuple[float, Distribution, float]:
        """min over Q of D(Q||p1) + D(Q||p2), its minimizer Q_1/2 and threshold"""
        self.require_same_alphabet(p1=p1, p2=p2)
        q_half = tilt(p1, p1, p2, 0.5)
        return 2.0 * bhattacharyya(p1, p2), q_half, llr_gap(q_half, p1, p2)
