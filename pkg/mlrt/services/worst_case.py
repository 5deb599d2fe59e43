"""
Worst-case exponents of a mismatched LRT over relative-entropy balls.

For hypothesis 1 the program is

    min D(Q || P)  over  D(p_hat1 || P) <= R,  llr_gap(Q, p_hat1, p_hat2) >= gamma_hat.

At an interior optimum Q is the tilt of P along c = log(p_hat2 / p_hat1) and P is
the mixture beta * Q + (1 - beta) * p_hat1. Writing w = exp(lam * (c - max c)) and
v in [0, 1), these conditions are solved in closed form by

    P proportional to p_hat1 / (1 - v * w),  Q proportional to P * w,

with beta = 1 - 1 / sum(p_hat1 / (1 - v * w)). The remaining two scalars are fixed
by the active constraints: lam by the threshold (inner search) and v = 1 - exp(-s)
by the radius (outer search). Hypothesis 2 is the same program for the swapped
test centered at p_hat2.
"""

import math
from typing import List, Optional, Tuple

import numpy as np
from scipy.special import logsumexp

from mlrt.exceptions import UnboundedLambdaError
from mlrt.models.distribution import Distribution
from mlrt.models.exponents import MismatchedTest
from mlrt.models.robust import BallExtreme, Direction, KlBall, WorstCaseSolution, WorstCaseStatus
from mlrt.services.base_service import BaseService
from mlrt.utils.cancellation import CancellationToken
from mlrt.utils.halfspace import min_kl_halfspace
from mlrt.utils.root_finding import grow_upper_bracket, solve_increasing
from mlrt.utils.simplex_core import kl, log_ratio, tilt

BOUNDARY_CLAMP = 1e-12
MAX_CRITICAL_RADIUS = 50.0
RADIUS_RESIDUAL_TOL = 1e-9


class WorstCaseService(BaseService):
    """Service for least-favorable distributions over D-balls around the test distributions"""

    def is_in_ball(self, ball: KlBall, p: Distribution) -> bool:
        self.require_same_alphabet(center=ball.center, p=p)
        return kl(ball.center, p) <= ball.radius

    # ball extremes

    def ball_llr_extreme(self, test_dists: Tuple[Distribution, Distribution], ball: KlBall,
                         direction: Direction = Direction.MAX,
                         token: Optional[CancellationToken] = None) -> BallExtreme:
        """Extremize P -> llr_gap(P, p_hat1, p_hat2) over {P : D(center || P) <= R}.

        The maximizer is P(x) = mu * center(x) / (nu - c(x)) with nu > max c; nu
        is searched as max c + spread * exp(-t) so that the radius is active.
        """
        p_hat1, p_hat2 = test_dists
        self.require_same_alphabet(p_hat1=p_hat1, p_hat2=p_hat2, center=ball.center)
        c = log_ratio(p_hat1, p_hat2)
        center = ball.center.probs
        spread = float(np.ptp(c))
        if ball.radius == 0.0 or spread == 0.0:
            return BallExtreme(float(center @ c), ball.center, boundary=False)

        a = c if Direction(direction) == Direction.MAX else -c
        top = a == a.max()
        if ball.radius >= -math.log(float(center[top].sum())):
            # the face spanned by the maximizing symbols lies inside the ball
            p = np.where(top, center, 0.0)
            return self._clamped_extreme(p / p.sum(), c, ball.radius)

        gap = a.max() - a
        log_center = np.log(center)
        log_spread = math.log(spread)

        def log_stationary(t: float) -> np.ndarray:
            with np.errstate(divide='ignore'):
                log_denominator = np.logaddexp(np.log(gap), log_spread - t)
            log_w = log_center - log_denominator
            return log_w - logsumexp(log_w)

        def divergence(t: float) -> float:
            return float(center @ (log_center - log_stationary(t)))

        lo = 0.0
        step = 1.0
        while divergence(lo) >= ball.radius:
            lo -= step
            step *= 2.0
        lo, hi = grow_upper_bracket(divergence, ball.radius, lo=lo, start=max(lo + 1.0, 1.0),
                                    token=token, label='ball multiplier')
        t = solve_increasing(divergence, ball.radius, lo, hi, self.tol, token=token,
                             label='ball multiplier')

        return self._clamped_extreme(np.exp(log_stationary(t)), c, ball.radius)

    def _clamped_extreme(self, p: np.ndarray, c: np.ndarray, radius: float) -> BallExtreme:
        boundary = bool(np.any(p < BOUNDARY_CLAMP))
        if boundary:
            self.logger.warning("ball extreme touches the clamp %.0e at R=%g", BOUNDARY_CLAMP,
                                radius)
            p = np.maximum(p, BOUNDARY_CLAMP)
        p = p / p.sum()
        return BallExtreme(float(p @ c), Distribution(p), boundary=boundary)

    # worst-case exponents

    def worst_case_exponent_1(self, p_hat1: Distribution, p_hat2: Distribution, gamma_hat: float,
                              radius: float,
                              token: Optional[CancellationToken] = None) -> WorstCaseSolution:
        """Least-favorable type-I exponent over B(p_hat1, radius)"""
        self.log_operation('worst_case_exponent_1', {'gamma_hat': gamma_hat, 'radius': radius})
        return self._solve(MismatchedTest(p_hat1, p_hat2, gamma_hat), radius, 1, token)

    def worst_case_exponent_2(self, p_hat1: Distribution, p_hat2: Distribution, gamma_hat: float,
                              radius: float,
                              token: Optional[CancellationToken] = None) -> WorstCaseSolution:
        """Least-favorable type-II exponent over B(p_hat2, radius); lam tilts toward p_hat1"""
        self.log_operation('worst_case_exponent_2', {'gamma_hat': gamma_hat, 'radius': radius})
        return self._solve(MismatchedTest(p_hat2, p_hat1, -gamma_hat), radius, 2, token)

    def _solve(self, test: MismatchedTest, radius: float, hypothesis: int,
               token: Optional[CancellationToken]) -> WorstCaseSolution:
        # test is oriented so that its first distribution is the ball center
        ball = KlBall(test.p_hat1, radius)
        center = ball.center
        self.require_same_alphabet(p_hat1=test.p_hat1, p_hat2=test.p_hat2)

        def solution(exponent, p_least, q_opt, lam, beta, status, residuals=None):
            return WorstCaseSolution(exponent=exponent, p_least=p_least, q_opt=q_opt, lam=lam,
                                     beta=beta, status=status, hypothesis=hypothesis,
                                     radius=radius, residuals=residuals or {})

        if test.is_degenerate:
            # the statistic is identically 0
            if test.gamma_hat <= 0.0:
                return solution(0.0, center, center, 0.0, 0.0, WorstCaseStatus.CENTER_DEGENERATE)
            return solution(math.inf, center, None, 0.0, 0.0, WorstCaseStatus.CENTER_DEGENERATE)

        c = log_ratio(test.p_hat1, test.p_hat2)
        extreme = self.ball_llr_extreme((test.p_hat1, test.p_hat2), ball, Direction.MAX, token)
        if extreme.value >= test.gamma_hat:
            self.logger.debug("ball reaches the decision region: zero exponent at R=%g", radius)
            return solution(0.0, extreme.argmax, extreme.argmax, 0.0, 1.0,
                            WorstCaseStatus.ZERO_EXPONENT)

        if test.gamma_hat >= c.max():
            raise UnboundedLambdaError(
                "threshold is not below the statistic supremum; the decision region is empty",
                threshold=test.gamma_hat, supremum=float(c.max()),
            )

        if radius == 0.0:
            sol = min_kl_halfspace(center, c, test.gamma_hat, self.tol, token=token)
            return solution(sol.exponent, center, sol.q, sol.lam, 0.0, WorstCaseStatus.INTERIOR)

        return self._interior(test, c, radius, token, solution)

    def _interior(self, test: MismatchedTest, c: np.ndarray, radius: float,
                  token: Optional[CancellationToken], solution) -> WorstCaseSolution:
        center = test.p_hat1.probs
        gamma_hat = test.gamma_hat
        shifted = c - c.max()
        log_center = np.log(center)

        def stationary_pair(lam: float, s: float):
            w = np.exp(lam * shifted)
            v = -math.expm1(-s)
            # 1 - v * w, kept accurate when v * w is close to 1
            log_denominator = np.log1p(-v * w)
            at_top = w == 1.0
            if np.any(at_top):
                log_denominator[at_top] = -s
            log_p = log_center - log_denominator
            log_mass = logsumexp(log_p)
            log_p = log_p - log_mass
            log_q = log_p + lam * shifted
            log_q = log_q - logsumexp(log_q)
            beta = -math.expm1(-log_mass)
            return np.exp(log_p), np.exp(log_q), beta

        def lambda_for(s: float) -> float:
            def threshold_gap(lam: float) -> float:
                return float(stationary_pair(lam, s)[1] @ c)

            lo, hi = grow_upper_bracket(threshold_gap, gamma_hat, token=token)
            return solve_increasing(threshold_gap, gamma_hat, lo, hi, self.tol, token=token)

        def radius_of(s: float) -> float:
            p, _, _ = stationary_pair(lambda_for(s), s)
            return kl(center, p)

        lo, hi = grow_upper_bracket(radius_of, radius, token=token, label='mixture weight')
        s = solve_increasing(radius_of, radius, lo, hi, self.tol, token=token,
                             residual_tol=RADIUS_RESIDUAL_TOL, label='mixture weight')
        lam = lambda_for(s)
        p, q, beta = stationary_pair(lam, s)

        p_least = Distribution(p / p.sum())
        q_opt = Distribution(q / q.sum())
        residuals = {
            'threshold': float(q_opt.probs @ c - gamma_hat),
            'radius': kl(center, p_least) - radius,
            'mixture': float(np.max(np.abs(p_least.probs - beta * q_opt.probs
                                           - (1.0 - beta) * center))),
            'tilt': float(np.max(np.abs(
                q_opt.probs - tilt(p_least, test.p_hat1, test.p_hat2, lam).probs))),
        }
        self.logger.debug("interior worst case: lam=%.10g beta=%.10g residuals=%s", lam, beta,
                          residuals)
        return solution(kl(q_opt, p_least), p_least, q_opt, lam, beta, WorstCaseStatus.INTERIOR,
                        residuals)

    def critical_radius(self, p_hat1: Distribution, p_hat2: Distribution, gamma_hat: float,
                        hypothesis: int = 1,
                        token: Optional[CancellationToken] = None) -> float:
        """Smallest radius at which the worst-case exponent drops to 0 (inf if none up to 50)"""
        self.validate_field_range('hypothesis', hypothesis, 1, 2)
        if hypothesis == 1:
            test = MismatchedTest(p_hat1, p_hat2, gamma_hat)
        else:
            test = MismatchedTest(p_hat2, p_hat1, -gamma_hat)
        test.require_distinct()
        c = log_ratio(test.p_hat1, test.p_hat2)
        dists = (test.p_hat1, test.p_hat2)

        if float(test.p_hat1.probs @ c) >= test.gamma_hat:
            return 0.0
        if test.gamma_hat >= c.max():
            return math.inf

        def ball_max(r: float) -> float:
            return self.ball_llr_extreme(dists, KlBall(test.p_hat1, r), Direction.MAX, token).value

        if ball_max(MAX_CRITICAL_RADIUS) < test.gamma_hat:
            self.logger.info("no zero crossing below R=%g", MAX_CRITICAL_RADIUS)
            return math.inf
        return solve_increasing(ball_max, test.gamma_hat, 0.0, MAX_CRITICAL_RADIUS, self.tol,
                                token=token, label='critical radius')

    def worst_case_tradeoff(self, p_hat1: Distribution, p_hat2: Distribution, radius1: float,
                            radius2: float, gammas) -> List[Tuple[float, float, float]]:
        """Rows (gamma_hat, E1_worst, E2_worst) over a threshold grid"""
        rows = []
        for gamma_hat in gammas:
            e1 = self.worst_case_exponent_1(p_hat1, p_hat2, float(gamma_hat), radius1).exponent
            e2 = self.worst_case_exponent_2(p_hat1, p_hat2, float(gamma_hat), radius2).exponent
            rows.append((float(gamma_hat), e1, e2))
        return rows
