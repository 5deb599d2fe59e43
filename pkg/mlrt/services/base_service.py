"""
Base Service Class for the exponent solvers
Provides shared tolerance settings, logging and argument checks
"""

import logging
from abc import ABC
from typing import Any, Dict, Optional

from mlrt.config import config
from mlrt.exceptions import ValidationError
from mlrt.models.distribution import Distribution
from mlrt.models.tolerance import ToleranceConfig


class BaseService(ABC):
    """Base service class with common patterns"""

    def __init__(self, tolerance: Optional[ToleranceConfig] = None):
        self.tol = tolerance or config.tolerance()
        self.logger = logging.getLogger(self.__class__.__name__)

    def log_operation(self, operation: str, details: Optional[Dict[str, Any]] = None,
                      level: int = logging.DEBUG) -> None:
        """Log an entry point with its scalar arguments"""
        if details:
            self.logger.log(level, f"{operation}: {details}")
        else:
            self.logger.log(level, operation)

    @staticmethod
    def require_same_alphabet(**dists: Distribution) -> int:
        """Check that all distributions share one alphabet and return its size"""
        sizes = {name: d.alphabet_size for name, d in dists.items()}
        if len(set(sizes.values())) != 1:
            raise ValidationError(f"alphabet size mismatch: {sizes}", field='alphabet_size')
        return next(iter(sizes.values()))

    @staticmethod
    def validate_field_range(field: str, value: float, min_value: Optional[float] = None,
                             max_value: Optional[float] = None) -> None:
        """Validate that a scalar argument is within the specified closed range"""
        if min_value is not None and value < min_value:
            raise ValidationError(f"Field '{field}' must be >= {min_value}", field=field,
                                  value=value)
        if max_value is not None and value > max_value:
            raise ValidationError(f"Field '{field}' must be <= {max_value}", field=field,
                                  value=value)
