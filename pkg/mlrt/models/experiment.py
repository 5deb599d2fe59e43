"""
Batch experiment configuration and sweep rows for the command-line front end
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Union

from mlrt.models.base_model import BaseModel
from mlrt.models.distribution import Distribution

GAMMA_AUTO_BAYES = 'auto_bayes'
GAMMA_AUTO_STEIN = 'auto_stein'
OUTPUT_FORMATS = ('csv', 'json')


def _vec(dist: Optional[Distribution]) -> Optional[List[float]]:
    return None if dist is None else [float(x) for x in dist.probs]


def _dist(value: Optional[List[float]], name: str) -> Optional[Distribution]:
    return None if value is None else Distribution(value, name=name)


@dataclass(frozen=True)
class ExperimentConfig(BaseModel):
    """Validated experiment inputs; unset distributions fall back per subcommand."""

    p1: Optional[Distribution] = None
    p2: Optional[Distribution] = None
    p_hat1: Optional[Distribution] = None
    p_hat2: Optional[Distribution] = None
    gamma: Union[float, str] = GAMMA_AUTO_BAYES
    radii: List[float] = field(default_factory=list)
    epsilon: float = 0.1
    n_list: List[int] = field(default_factory=lambda: [100])
    seed: int = 0
    trials: int = 0
    scan_points: int = 100
    output_format: str = 'csv'

    @property
    def generating(self):
        """(P1, P2), defaulting to the test distributions when not given."""
        return (self.p1 or self.p_hat1, self.p2 or self.p_hat2)

    @property
    def testing(self):
        """(P_hat1, P_hat2), defaulting to the generating distributions when not given."""
        return (self.p_hat1 or self.p1, self.p_hat2 or self.p2)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ExperimentConfig':
        gamma = data.get('gamma', GAMMA_AUTO_BAYES)
        return cls(
            p1=_dist(data.get('p1'), 'p1'),
            p2=_dist(data.get('p2'), 'p2'),
            p_hat1=_dist(data.get('p_hat1'), 'p_hat1'),
            p_hat2=_dist(data.get('p_hat2'), 'p_hat2'),
            gamma=gamma if isinstance(gamma, str) else float(gamma),
            radii=[float(r) for r in data.get('radii', [])],
            epsilon=float(data.get('epsilon', 0.1)),
            n_list=[int(n) for n in data.get('n_list', [100])],
            seed=int(data.get('seed', 0)),
            trials=int(data.get('trials', 0)),
            scan_points=int(data.get('scan_points', 100)),
            output_format=str(data.get('output_format', 'csv')),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            'p1': _vec(self.p1),
            'p2': _vec(self.p2),
            'p_hat1': _vec(self.p_hat1),
            'p_hat2': _vec(self.p_hat2),
            'gamma': self.gamma,
            'radii': list(self.radii),
            'epsilon': self.epsilon,
            'n_list': list(self.n_list),
            'seed': self.seed,
            'trials': self.trials,
            'scan_points': self.scan_points,
            'output_format': self.output_format,
        }


@dataclass(frozen=True)
class SweepRow(BaseModel):
    """One radius of the worst-case Bayes exponent sweep."""

    r: float
    exact_e1: float
    exact_e2: float
    taylor_e1: float
    taylor_e2: float
    slope_diagnostic: float
    status1: str
    status2: str

    @property
    def exact_bayes(self) -> float:
        return min(self.exact_e1, self.exact_e2)

    @property
    def taylor_bayes(self) -> float:
        return min(self.taylor_e1, self.taylor_e2)

    COLUMNS = ('r', 'exact_e1', 'exact_e2', 'exact_bayes', 'taylor_e1', 'taylor_e2',
               'taylor_bayes', 'slope_diagnostic', 'status1', 'status2')

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'SweepRow':
        return cls(
            r=float(data['r']),
            exact_e1=float(data['exact_e1']),
            exact_e2=float(data['exact_e2']),
            taylor_e1=float(data['taylor_e1']),
            taylor_e2=float(data['taylor_e2']),
            slope_diagnostic=float(data['slope_diagnostic']),
            status1=str(data['status1']),
            status2=str(data['status2']),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            'r': self.r,
            'exact_e1': self.exact_e1,
            'exact_e2': self.exact_e2,
            'exact_bayes': self.exact_bayes,
            'taylor_e1': self.taylor_e1,
            'taylor_e2': self.taylor_e2,
            'taylor_bayes': self.taylor_bayes,
            'slope_diagnostic': self.slope_diagnostic,
            'status1': self.status1,
            'status2': self.status2,
        }


@dataclass(frozen=True)
class CommandReport(BaseModel):
    """Tabular subcommand output: ordered rows under fixed columns plus scalar summary."""

    command: str
    columns: List[str]
    rows: List[Dict[str, Any]]
    summary: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'CommandReport':
        return cls(
            command=str(data['command']),
            columns=list(data['columns']),
            rows=[dict(row) for row in data['rows']],
            summary=dict(data.get('summary', {})),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            'command': self.command,
            'columns': list(self.columns),
            'rows': [dict(row) for row in self.rows],
            'summary': dict(self.summary),
        }
