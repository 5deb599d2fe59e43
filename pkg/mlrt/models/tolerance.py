"""
Numeric tolerance settings shared by every solver
"""

from dataclasses import dataclass
from typing import Any, Dict

from mlrt.exceptions import ValidationError
from mlrt.models.base_model import BaseModel


@dataclass(frozen=True)
class ToleranceConfig(BaseModel):
    """Absolute/relative tolerances (nats) and an iteration cap for root searches."""

    abs_tol: float = 1e-10
    rel_tol: float = 1e-9
    max_iter: int = 200

    def __post_init__(self) -> None:
        if not self.abs_tol > 0:
            raise ValidationError("abs_tol must be positive", field='abs_tol', value=self.abs_tol)
        if not self.rel_tol > 0:
            raise ValidationError("rel_tol must be positive", field='rel_tol', value=self.rel_tol)
        if int(self.max_iter) != self.max_iter or self.max_iter < 1:
            raise ValidationError("max_iter must be an integer >= 1", field='max_iter',
                                  value=self.max_iter)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ToleranceConfig':
        return cls(
            abs_tol=float(data.get('abs_tol', 1e-10)),
            rel_tol=float(data.get('rel_tol', 1e-9)),
            max_iter=int(data.get('max_iter', 200)),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {'abs_tol': self.abs_tol, 'rel_tol': self.rel_tol, 'max_iter': self.max_iter}
