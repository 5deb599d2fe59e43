"""
Exponent-level result types for matched and mismatched likelihood ratio tests
"""

from dataclasses import dataclass
from typing import Any, Dict, Optional

from mlrt.exceptions import ValidationError
from mlrt.models.base_model import BaseModel
from mlrt.models.distribution import Distribution


def _dist_to_dict(dist: Optional[Distribution]) -> Optional[list]:
    return None if dist is None else [float(x) for x in dist.probs]


def _dist_from_dict(value: Optional[list]) -> Optional[Distribution]:
    return None if value is None else Distribution(value)


@dataclass(frozen=True)
class ThresholdRange(BaseModel):
    """Closed interval [-D(P1||P2), D(P2||P1)] of thresholds with a tilted minimizer."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValidationError("threshold range must satisfy lo <= hi", field='lo',
                                  value=self.lo)

    def contains(self, gamma: float) -> bool:
        return self.lo <= gamma <= self.hi

    def interior(self, points: int) -> list:
        """Uniform grid over the open interval, endpoints excluded."""
        step = (self.hi - self.lo) / (points + 1)
        return [self.lo + step * (k + 1) for k in range(points)]

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ThresholdRange':
        return cls(lo=float(data['lo']), hi=float(data['hi']))

    def to_dict(self) -> Dict[str, Any]:
        return {'lo': self.lo, 'hi': self.hi}


@dataclass(frozen=True)
class ExponentPair(BaseModel):
    """(E1, E2) with achieving distributions and tilt parameters.

    An achiever is None only when its exponent is infinite, i.e. the
    half-space meets the simplex at most on its boundary.
    """

    e1: float
    e2: float
    q1: Optional[Distribution]
    q2: Optional[Distribution]
    lambda1: float
    lambda2: float
    gamma: Optional[float] = None

    @property
    def bayes(self) -> float:
        return min(self.e1, self.e2)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ExponentPair':
        return cls(
            e1=float(data['e1']),
            e2=float(data['e2']),
            q1=_dist_from_dict(data.get('q1')),
            q2=_dist_from_dict(data.get('q2')),
            lambda1=float(data['lambda1']),
            lambda2=float(data['lambda2']),
            gamma=None if data.get('gamma') is None else float(data['gamma']),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            'gamma': self.gamma,
            'e1': self.e1,
            'e2': self.e2,
            'lambda1': self.lambda1,
            'lambda2': self.lambda2,
            'q1': _dist_to_dict(self.q1),
            'q2': _dist_to_dict(self.q2),
        }


@dataclass(frozen=True)
class MismatchedTest(BaseModel):
    """Test distributions and threshold; decide hypothesis 2 when llr_gap >= gamma_hat."""

    p_hat1: Distribution
    p_hat2: Distribution
    gamma_hat: float

    def __post_init__(self) -> None:
        if self.p_hat1.alphabet_size != self.p_hat2.alphabet_size:
            raise ValidationError("test distributions must share an alphabet",
                                  field='alphabet_size')

    @property
    def is_degenerate(self) -> bool:
        """True when both test distributions coincide and the statistic is identically 0."""
        return self.p_hat1 == self.p_hat2

    def require_distinct(self) -> None:
        if self.is_degenerate:
            raise ValidationError("test distributions must differ", field='p_hat2')

    @property
    def alphabet_size(self) -> int:
        return self.p_hat1.alphabet_size

    def swapped(self) -> 'MismatchedTest':
        """Same decision regions seen from hypothesis 2: anchors swapped, threshold negated."""
        return MismatchedTest(self.p_hat2, self.p_hat1, -self.gamma_hat)

    def with_threshold(self, gamma_hat: float) -> 'MismatchedTest':
        return MismatchedTest(self.p_hat1, self.p_hat2, gamma_hat)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'MismatchedTest':
        return cls(Distribution(data['p_hat1']), Distribution(data['p_hat2']),
                   float(data['gamma_hat']))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'p_hat1': _dist_to_dict(self.p_hat1),
            'p_hat2': _dist_to_dict(self.p_hat2),
            'gamma_hat': self.gamma_hat,
        }


@dataclass(frozen=True)
class MismatchedResult(BaseModel):
    """One mismatched exponent with its achiever and tilt parameter."""

    exponent: float
    q: Optional[Distribution]
    lam: float
    condition_holds: bool

    def __iter__(self):
        # unpacks as (exponent, q, lambda)
        return iter((self.exponent, self.q, self.lam))

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'MismatchedResult':
        return cls(float(data['exponent']), _dist_from_dict(data.get('q')), float(data['lambda']),
                   bool(data['condition_holds']))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'exponent': self.exponent,
            'q': _dist_to_dict(self.q),
            'lambda': self.lam,
            'condition_holds': self.condition_holds,
        }


@dataclass(frozen=True)
class SteinReport(BaseModel):
    """Stein-regime threshold, exponent, dispersion and finite-n correction constant."""

    threshold: float
    exponent: float
    variance: float
    c_hat2: float
    limiting_threshold: float
    epsilon: float
    n: int

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'SteinReport':
        return cls(
            threshold=float(data['threshold']),
            exponent=float(data['exponent']),
            variance=float(data['variance']),
            c_hat2=float(data['c_hat2']),
            limiting_threshold=float(data['limiting_threshold']),
            epsilon=float(data['epsilon']),
            n=int(data['n']),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            'n': self.n,
            'epsilon': self.epsilon,
            'threshold': self.threshold,
            'limiting_threshold': self.limiting_threshold,
            'exponent': self.exponent,
            'variance': self.variance,
            'c_hat2': self.c_hat2,
        }
