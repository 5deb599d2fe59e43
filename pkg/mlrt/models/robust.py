"""
Uncertainty-set and sensitivity result types
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from mlrt.exceptions import ValidationError
from mlrt.models.base_model import BaseModel
from mlrt.models.distribution import Distribution


class WorstCaseStatus(str, Enum):
    INTERIOR = 'interior'
    ZERO_EXPONENT = 'zero_exponent'
    CENTER_DEGENERATE = 'center_degenerate'


class Direction(str, Enum):
    MAX = 'max'
    MIN = 'min'


@dataclass(frozen=True)
class KlBall(BaseModel):
    """B(center, R) = {P : D(center || P) <= R}; the center is the first KL argument."""

    center: Distribution
    radius: float

    def __post_init__(self) -> None:
        if not np.isfinite(self.radius) or self.radius < 0.0:
            raise ValidationError("ball radius must be finite and >= 0", field='radius',
                                  value=self.radius)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'KlBall':
        return cls(Distribution(data['center']), float(data['radius']))

    def to_dict(self) -> Dict[str, Any]:
        return {'center': self.center.probs.tolist(), 'radius': self.radius}


@dataclass(frozen=True)
class BallExtreme(BaseModel):
    """Extremum of the test statistic over a ball, with its attaining distribution."""

    value: float
    argmax: Distribution
    boundary: bool = False

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'BallExtreme':
        return cls(float(data['value']), Distribution(data['argmax']), bool(data['boundary']))

    def to_dict(self) -> Dict[str, Any]:
        return {'value': self.value, 'argmax': self.argmax.probs.tolist(),
                'boundary': self.boundary}


@dataclass(frozen=True)
class WorstCaseSolution(BaseModel):
    """Least-favorable distribution P^L, optimizer Q^L and multipliers for one hypothesis."""

    exponent: float
    p_least: Distribution
    q_opt: Optional[Distribution]
    lam: float
    beta: float
    status: WorstCaseStatus
    hypothesis: int = 1
    radius: float = 0.0
    residuals: Dict[str, float] = field(default_factory=dict, compare=False)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'WorstCaseSolution':
        q_opt = data.get('q_opt')
        return cls(
            exponent=float(data['exponent']),
            p_least=Distribution(data['p_least']),
            q_opt=None if q_opt is None else Distribution(q_opt),
            lam=float(data['lambda']),
            beta=float(data['beta']),
            status=WorstCaseStatus(data['status']),
            hypothesis=int(data.get('hypothesis', 1)),
            radius=float(data.get('radius', 0.0)),
            residuals={k: float(v) for k, v in data.get('residuals', {}).items()},
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            'hypothesis': self.hypothesis,
            'radius': self.radius,
            'status': self.status.value,
            'exponent': self.exponent,
            'lambda': self.lam,
            'beta': self.beta,
            'p_least': self.p_least.probs.tolist(),
            'q_opt': None if self.q_opt is None else self.q_opt.probs.tolist(),
            'residuals': dict(self.residuals),
        }


@dataclass(frozen=True)
class SensitivityReport(BaseModel):
    """Square-root-radius slopes S1, S2 of the worst-case exponents at R = 0."""

    s1: float
    s2: float
    lam: float
    q_tilt: Distribution
    e1: float
    e2: float
    gamma_hat: float

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'SensitivityReport':
        return cls(
            s1=float(data['s1']),
            s2=float(data['s2']),
            lam=float(data['lambda']),
            q_tilt=Distribution(data['q_tilt']),
            e1=float(data['e1']),
            e2=float(data['e2']),
            gamma_hat=float(data['gamma_hat']),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            'gamma_hat': self.gamma_hat,
            'lambda': self.lam,
            's1': self.s1,
            's2': self.s2,
            'e1': self.e1,
            'e2': self.e2,
            'q_tilt': self.q_tilt.probs.tolist(),
        }


@dataclass(frozen=True, eq=False)
class QuadraticModel(BaseModel):
    """Local Fisher-metric model of the worst-case program around a test distribution."""

    fisher_diag: np.ndarray
    gradient: np.ndarray
    psi: np.ndarray
    theta: np.ndarray
    exponent: float
    radius: float

    @property
    def constraint_value(self) -> float:
        """1/2 theta^T J theta."""
        return 0.5 * float(np.sum(self.fisher_diag * self.theta ** 2))

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'QuadraticModel':
        return cls(
            fisher_diag=np.asarray(data['fisher_diag'], dtype=float),
            gradient=np.asarray(data['gradient'], dtype=float),
            psi=np.asarray(data['psi'], dtype=float),
            theta=np.asarray(data['theta'], dtype=float),
            exponent=float(data['exponent']),
            radius=float(data['radius']),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            'exponent': self.exponent,
            'radius': self.radius,
            'fisher_diag': self.fisher_diag.tolist(),
            'gradient': self.gradient.tolist(),
            'psi': self.psi.tolist(),
            'theta': self.theta.tolist(),
        }


@dataclass(frozen=True)
class MonotonicityScan(BaseModel):
    """Sensitivity coefficients over a threshold grid and the sign of their discrete differences."""

    rows: List[Tuple[float, float, float]]
    slack: float = 1e-9

    @property
    def gammas(self) -> np.ndarray:
        return np.array([row[0] for row in self.rows])

    @property
    def s1(self) -> np.ndarray:
        return np.array([row[1] for row in self.rows])

    @property
    def s2(self) -> np.ndarray:
        return np.array([row[2] for row in self.rows])

    @property
    def s1_nondecreasing(self) -> bool:
        return bool(np.all(np.diff(self.s1) >= -self.slack))

    @property
    def s2_nonincreasing(self) -> bool:
        return bool(np.all(np.diff(self.s2) <= self.slack))

    @property
    def crossing_gamma(self) -> Optional[float]:
        """Threshold where s1 = s2, linearly interpolated on the grid."""
        diff = self.s1 - self.s2
        idx = np.nonzero(np.diff(np.sign(diff)))[0]
        if idx.size == 0:
            return None
        k = int(idx[0])
        g0, g1 = self.gammas[k], self.gammas[k + 1]
        d0, d1 = diff[k], diff[k + 1]
        if d1 == d0:
            return float(g0)
        return float(g0 - d0 * (g1 - g0) / (d1 - d0))

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'MonotonicityScan':
        rows = [(float(r['gamma_hat']), float(r['s1']), float(r['s2'])) for r in data['rows']]
        return cls(rows, float(data.get('slack', 1e-9)))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'rows': [{'gamma_hat': g, 's1': s1, 's2': s2} for g, s1, s2 in self.rows],
            'slack': self.slack,
            's1_nondecreasing': self.s1_nondecreasing,
            's2_nonincreasing': self.s2_nonincreasing,
            'crossing_gamma': self.crossing_gamma,
        }
