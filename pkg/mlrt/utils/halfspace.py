"""
Relative-entropy projection onto a half-space of the simplex and its dual.

Every exponent in the toolkit reduces to

    min D(Q || base)  subject to  E_Q[direction] >= threshold,

whose minimizer is the exponential tilt base * exp(lam * direction) with lam
chosen so the constraint is active, and whose dual is the concave
one-dimensional program max_lam lam * threshold - log E_base[exp(lam * direction)].
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import logsumexp

from mlrt.exceptions import UnboundedLambdaError
from mlrt.models.distribution import Distribution
from mlrt.models.tolerance import ToleranceConfig
from mlrt.utils.cancellation import CancellationToken
from mlrt.utils.root_finding import grow_upper_bracket, solve_increasing
from mlrt.utils.simplex_core import as_vector, kl, tilt_vector

logger = logging.getLogger(__name__)

_TINY = np.finfo(float).tiny


@dataclass(frozen=True)
class HalfspaceSolution:
    exponent: float
    q: Distribution
    lam: float
    condition_holds: bool


def tilted_mean(base: np.ndarray, direction: np.ndarray, lam: float) -> float:
    """E_Q[direction] under the tilt of base by lam."""
    return float(tilt_vector(base, direction, lam) @ direction)


def to_distribution(weights: np.ndarray) -> Distribution:
    w = np.maximum(weights, _TINY)
    return Distribution(w / w.sum())


def solve_tilt_parameter(base: np.ndarray, direction: np.ndarray, threshold: float,
                         tol: ToleranceConfig, upper: Optional[float] = None,
                         token: Optional[CancellationToken] = None) -> float:
    """Smallest lam >= 0 with E_{tilt(lam)}[direction] = threshold.

    With an explicit upper limit the search stays in [0, upper] and returns
    upper if the threshold is not reached there; without one the bracket is
    grown geometrically.
    """
    def mean_at(lam: float) -> float:
        return tilted_mean(base, direction, lam)

    if mean_at(0.0) >= threshold:
        return 0.0
    if upper is not None:
        if mean_at(upper) <= threshold:
            return upper
        lo, hi = 0.0, upper
    else:
        supremum = float(direction.max())
        if threshold >= supremum:
            raise UnboundedLambdaError(
                f"threshold {threshold:.6g} is not below the statistic supremum {supremum:.6g}",
                threshold=threshold, supremum=supremum,
            )
        lo, hi = grow_upper_bracket(mean_at, threshold, token=token)
    return solve_increasing(mean_at, threshold, lo, hi, tol, token=token)


def min_kl_halfspace(base, direction: np.ndarray, threshold: float, tol: ToleranceConfig,
                     token: Optional[CancellationToken] = None) -> HalfspaceSolution:
    """Project base onto {Q : E_Q[direction] >= threshold} in relative entropy."""
    b = as_vector(base, 'base')
    mean0 = float(b @ direction)
    if mean0 >= threshold:
        dist = base if isinstance(base, Distribution) else Distribution(b)
        return HalfspaceSolution(0.0, dist, 0.0, condition_holds=mean0 == threshold)

    lam = solve_tilt_parameter(b, direction, threshold, tol, token=token)
    q = to_distribution(tilt_vector(b, direction, lam))
    return HalfspaceSolution(kl(q, b), q, lam, condition_holds=True)


def dual_objective(base: np.ndarray, direction: np.ndarray, threshold: float,
                   lam: float) -> float:
    """lam * threshold - log sum base * exp(lam * direction)."""
    return float(lam * threshold - logsumexp(np.log(base) + lam * direction))


def maximize_dual(base, direction: np.ndarray, threshold: float, tol: ToleranceConfig,
                  cap: Optional[float] = None,
                  token: Optional[CancellationToken] = None) -> tuple:
    """Maximize the concave dual over lam in [0, cap] (cap None: unbounded).

    The derivative threshold - E_{tilt(lam)}[direction] is nonincreasing, so
    the maximizer is its root; returns (value, lam).
    """
    b = as_vector(base, 'base')
    w = b / b.sum()
    if float(w @ direction) >= threshold:
        lam = 0.0
    elif cap is not None:
        lam = solve_tilt_parameter(w, direction, threshold, tol, upper=cap, token=token)
    else:
        lam = solve_tilt_parameter(w, direction, threshold, tol, token=token)
    value = dual_objective(b, direction, threshold, lam)
    if not math.isfinite(value):
        raise UnboundedLambdaError("dual objective diverged", threshold=threshold)
    return value, lam
