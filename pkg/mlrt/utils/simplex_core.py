"""
Probability-simplex arithmetic shared by every solver.

All divergences are in nats. Functions accept either a Distribution or a
plain vector; strictly positive arguments are checked where a logarithm of
the argument is taken.
"""

from typing import Union

import numpy as np
from scipy.special import logsumexp, rel_entr

from mlrt.exceptions import DomainError, ValidationError
from mlrt.models.distribution import Distribution

VectorLike = Union[Distribution, np.ndarray, list, tuple]

_TINY = np.finfo(float).tiny


def as_vector(p: VectorLike, field: str = 'p') -> np.ndarray:
    """Float view of a distribution or vector."""
    if isinstance(p, Distribution):
        return p.probs
    arr = np.asarray(p, dtype=float)
    if arr.ndim != 1:
        raise ValidationError("expected a one-dimensional probability vector", field=field)
    return arr


def _check_same_alphabet(*vectors: np.ndarray) -> None:
    sizes = {v.size for v in vectors}
    if len(sizes) != 1:
        raise ValidationError(f"alphabet size mismatch: {sorted(sizes)}", field='alphabet_size')


def _check_positive(v: np.ndarray, field: str) -> None:
    if np.any(~np.isfinite(v)) or np.any(v <= 0.0):
        raise DomainError(f"{field} must be strictly positive", field=field)


def log_ratio(p_hat1: VectorLike, p_hat2: VectorLike) -> np.ndarray:
    """Per-symbol statistic c(x) = log(p_hat2(x) / p_hat1(x))."""
    a = as_vector(p_hat1, 'p_hat1')
    b = as_vector(p_hat2, 'p_hat2')
    _check_same_alphabet(a, b)
    _check_positive(a, 'p_hat1')
    _check_positive(b, 'p_hat2')
    return np.log(b) - np.log(a)


def kl(p: VectorLike, q: VectorLike) -> float:
    """D(p || q); p may sit on the simplex boundary (0 log 0 = 0), q may not."""
    pv = as_vector(p, 'p')
    qv = as_vector(q, 'q')
    _check_same_alphabet(pv, qv)
    _check_positive(qv, 'q')
    if np.any(pv < 0.0):
        raise DomainError("p must be nonnegative", field='p')
    return max(0.0, float(np.sum(rel_entr(pv, qv))))


def llr_gap(p: VectorLike, p_hat1: VectorLike, p_hat2: VectorLike) -> float:
    """D(p || p_hat1) - D(p || p_hat2), the type statistic of the likelihood ratio test."""
    pv = as_vector(p, 'p')
    c = log_ratio(p_hat1, p_hat2)
    _check_same_alphabet(pv, c)
    return float(pv @ c)


def tilt_vector(base: VectorLike, direction: np.ndarray, lam: float) -> np.ndarray:
    """Normalized base(x) * exp(lam * direction(x)) computed in the log domain.

    Entries may underflow to zero for very large lam; use tilt() when a valid
    Distribution is needed.
    """
    b = as_vector(base, 'base')
    _check_same_alphabet(b, direction)
    log_w = np.log(b) + lam * direction
    return np.exp(log_w - logsumexp(log_w))


def tilt(base: VectorLike, p_hat1: VectorLike, p_hat2: VectorLike, lam: float) -> Distribution:
    """Generalized tilt Q(x) proportional to base(x) p_hat1(x)^-lam p_hat2(x)^lam."""
    if not np.isfinite(lam):
        raise ValidationError("tilt parameter must be finite", field='lambda', value=lam)
    b = as_vector(base, 'base')
    _check_positive(b, 'base')
    w = tilt_vector(b, log_ratio(p_hat1, p_hat2), lam)
    # keep the result strictly positive when extreme tilts underflow
    w = np.maximum(w, _TINY)
    return Distribution(w / w.sum())


def bhattacharyya(p: VectorLike, q: VectorLike) -> float:
    """B(p, q) = -log sum sqrt(p q)."""
    pv = as_vector(p, 'p')
    qv = as_vector(q, 'q')
    _check_same_alphabet(pv, qv)
    return max(0.0, float(-np.log(np.sum(np.sqrt(pv * qv)))))


def chi_squared(q: VectorLike, p: VectorLike) -> float:
    """sum q^2 / p - 1, which equals Var_p(q / p); exactly 0 when q == p."""
    qv = as_vector(q, 'q')
    pv = as_vector(p, 'p')
    _check_same_alphabet(qv, pv)
    _check_positive(pv, 'p')
    return float(np.sum((qv - pv) ** 2 / pv))


def variance_under(p: VectorLike, values: np.ndarray) -> float:
    """Var_p(values(X)) for a per-symbol function."""
    pv = as_vector(p, 'p')
    _check_same_alphabet(pv, values)
    mean = float(pv @ values)
    return max(0.0, float(pv @ (values - mean) ** 2))
