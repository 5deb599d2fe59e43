"""
Parameter and result types for the brute-force oracles
"""

import math
from dataclasses import dataclass
from typing import Any, Dict, Optional

from mlrt.exceptions import ValidationError
from mlrt.models.base_model import BaseModel
from mlrt.models.distribution import Distribution, EmpiricalType


@dataclass(frozen=True)
class GridSpec(BaseModel):
    """Uniform simplex grid with points_per_dim levels per coordinate, floored away from 0."""

    points_per_dim: int
    floor: float = 1e-9

    def __post_init__(self) -> None:
        if int(self.points_per_dim) != self.points_per_dim or self.points_per_dim < 2:
            raise ValidationError("points_per_dim must be an integer >= 2",
                                  field='points_per_dim', value=self.points_per_dim)
        if not self.floor > 0.0:
            raise ValidationError("floor must be positive", field='floor', value=self.floor)

    def check_alphabet(self, alphabet_size: int) -> None:
        if self.floor > 1.0 / alphabet_size:
            raise ValidationError("floor must not exceed 1/alphabet_size", field='floor',
                                  value=self.floor)

    @property
    def spacing(self) -> float:
        return 1.0 / (self.points_per_dim - 1)

    def refined(self) -> 'GridSpec':
        """Grid with twice the density (spacing halved)."""
        return GridSpec(2 * self.points_per_dim - 1, self.floor)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'GridSpec':
        return cls(int(data['points_per_dim']), float(data.get('floor', 1e-9)))

    def to_dict(self) -> Dict[str, Any]:
        return {'points_per_dim': self.points_per_dim, 'floor': self.floor}


@dataclass(frozen=True)
class SimulationConfig(BaseModel):
    """Seeded Monte Carlo settings."""

    seed: int
    trials: int
    n: int

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValidationError("trials must be >= 1", field='trials', value=self.trials)
        if self.n < 1:
            raise ValidationError("n must be >= 1", field='n', value=self.n)
        if not 0 <= self.seed < 2 ** 64:
            raise ValidationError("seed must be a 64-bit unsigned integer", field='seed',
                                  value=self.seed)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'SimulationConfig':
        return cls(int(data['seed']), int(data['trials']), int(data['n']))

    def to_dict(self) -> Dict[str, Any]:
        return {'seed': self.seed, 'trials': self.trials, 'n': self.n}


def _slope(eps: float, n: int) -> float:
    return math.inf if eps <= 0.0 else -math.log(eps) / n


@dataclass(frozen=True)
class FiniteNResult(BaseModel):
    """Exact type-I/II error probabilities of a test at block length n.

    dominant1/dominant2 are the most probable type classes inside each error
    region; as n grows they approach the achievers of the exponents.
    """

    eps1: float
    eps2: float
    n: int
    prior1: float = 0.5
    dominant1: Optional[EmpiricalType] = None
    dominant2: Optional[EmpiricalType] = None

    def __post_init__(self) -> None:
        for name in ('eps1', 'eps2', 'prior1'):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValidationError(f"{name} must lie in [0, 1]", field=name, value=value)
        for name in ('dominant1', 'dominant2'):
            dominant = getattr(self, name)
            if dominant is not None and dominant.n != self.n:
                raise ValidationError(f"{name} must be a type of length {self.n}", field=name,
                                      value=dominant.n)

    @property
    def slope1(self) -> float:
        return _slope(self.eps1, self.n)

    @property
    def slope2(self) -> float:
        return _slope(self.eps2, self.n)

    @property
    def bayes_error(self) -> float:
        return self.prior1 * self.eps1 + (1.0 - self.prior1) * self.eps2

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'FiniteNResult':
        def dominant(key: str) -> Optional[EmpiricalType]:
            return EmpiricalType(data[key]) if data.get(key) is not None else None

        return cls(float(data['eps1']), float(data['eps2']), int(data['n']),
                   float(data.get('prior1', 0.5)), dominant('dominant1'), dominant('dominant2'))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'n': self.n,
            'eps1': self.eps1,
            'eps2': self.eps2,
            'slope1': self.slope1,
            'slope2': self.slope2,
            'prior1': self.prior1,
            'bayes_error': self.bayes_error,
            'dominant1': None if self.dominant1 is None else self.dominant1.counts.tolist(),
            'dominant2': None if self.dominant2 is None else self.dominant2.counts.tolist(),
        }


@dataclass(frozen=True)
class GridResult(BaseModel):
    """Grid minimum with its minimizers (q_arg only for joint searches)."""

    value: float
    argmin: Distribution
    q_arg: Optional[Distribution] = None
    feasible_points: int = 0

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'GridResult':
        q_arg = data.get('q_arg')
        return cls(float(data['value']), Distribution(data['argmin']),
                   None if q_arg is None else Distribution(q_arg),
                   int(data.get('feasible_points', 0)))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'value': self.value,
            'argmin': self.argmin.probs.tolist(),
            'q_arg': None if self.q_arg is None else self.q_arg.probs.tolist(),
            'feasible_points': self.feasible_points,
        }


@dataclass(frozen=True)
class MonteCarloResult(BaseModel):
    """Empirical error rates with binomial standard errors."""

    eps1_hat: float
    eps2_hat: float
    stderr1: float
    stderr2: float
    trials: int

    @property
    def stderr(self) -> tuple:
        return (self.stderr1, self.stderr2)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'MonteCarloResult':
        return cls(float(data['eps1_hat']), float(data['eps2_hat']), float(data['stderr1']),
                   float(data['stderr2']), int(data['trials']))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'trials': self.trials,
            'eps1_hat': self.eps1_hat,
            'eps2_hat': self.eps2_hat,
            'stderr1': self.stderr1,
            'stderr2': self.stderr2,
        }
