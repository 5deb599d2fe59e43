"""
Bracketed root finding for monotone scalar maps.

Every one-dimensional search in the toolkit (tilt parameter, ball multiplier,
mixture weight, critical radius) is a root of a monotone function, so a
bracket is grown geometrically and then closed with Brent's method.
"""

import logging
from typing import Callable, Optional, Tuple

import numpy as np
from scipy.optimize import brentq

from mlrt.exceptions import SolverError, UnboundedLambdaError
from mlrt.models.tolerance import ToleranceConfig
from mlrt.utils.cancellation import CancellationToken

logger = logging.getLogger(__name__)

MAX_DOUBLINGS = 60
_RTOL_FLOOR = 4.0 * np.finfo(float).eps


def grow_upper_bracket(func: Callable[[float], float], target: float, lo: float = 0.0,
                       start: float = 1.0, max_doublings: int = MAX_DOUBLINGS,
                       token: Optional[CancellationToken] = None,
                       label: str = 'lambda') -> Tuple[float, float]:
    """Double the upper end until a nondecreasing func reaches target."""
    hi = start
    doublings = 0
    while func(hi) < target:
        if token is not None:
            token.raise_if_cancelled(label)
        lo = hi
        hi *= 2.0
        doublings += 1
        if doublings > max_doublings:
            raise UnboundedLambdaError(
                f"could not bracket {label}: target not reached after {max_doublings} doublings",
                threshold=target,
            )
    if doublings:
        logger.debug("bracket for %s grown to [%g, %g] in %d doublings", label, lo, hi, doublings)
    return lo, hi


def solve_increasing(func: Callable[[float], float], target: float, lo: float, hi: float,
                     tol: ToleranceConfig, residual_tol: Optional[float] = None,
                     token: Optional[CancellationToken] = None,
                     label: str = 'lambda') -> float:
    """Root of func(x) = target for nondecreasing func on [lo, hi].

    Returns lo when func(lo) already meets the target, so ties go to the
    smaller argument. Convergence is declared on the argument width by Brent's
    method and then checked on the residual.
    """
    def shifted(x: float) -> float:
        if token is not None:
            token.raise_if_cancelled(label)
        return func(x) - target

    f_lo = shifted(lo)
    if f_lo >= 0.0:
        return lo
    f_hi = shifted(hi)
    if f_hi == 0.0:
        return hi
    if f_hi < 0.0:
        raise SolverError(
            f"bracket [{lo}, {hi}] does not enclose the {label} root",
            last_iterate=hi, residuals={'lower': f_lo, 'upper': f_hi},
        )

    xtol = max(tol.abs_tol * 1e-3, 1e-300)
    rtol = max(min(tol.rel_tol, 1e-12), _RTOL_FLOOR)
    root, info = brentq(shifted, lo, hi, xtol=xtol, rtol=rtol, maxiter=tol.max_iter,
                        full_output=True, disp=False)
    if not info.converged:
        raise SolverError(
            f"{label} search did not converge in {tol.max_iter} iterations ({info.flag})",
            last_iterate=float(root), residuals={'residual': float(shifted(root))},
        )

    residual = abs(shifted(root))
    limit = tol.abs_tol if residual_tol is None else residual_tol
    if residual > limit:
        raise SolverError(
            f"{label} search stalled with residual {residual:.3e} > {limit:.1e}",
            last_iterate=float(root), residuals={'residual': residual},
        )
    logger.debug("%s root %.15g after %d iterations", label, root, info.iterations)
    return float(root)
