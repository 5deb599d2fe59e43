"""
Base validator class providing common validation methods.
Experiment-specific validators inherit from this class.
"""

import math
from typing import Any, Dict, List, Optional

from mlrt.exceptions import ValidationError
from mlrt.models.distribution import SUM_TOLERANCE


class BaseValidator:
    """Base class for all validators with common validation methods."""

    @staticmethod
    def validate_required_fields(data: Dict[str, Any], required_fields: List[str]) -> None:
        """
        Validate that all required fields are present and not null.

        Args:
            data: Data dictionary to validate
            required_fields: List of required field names

        Raises:
            ValidationError: If any required field is missing or null
        """
        for field in required_fields:
            if field not in data:
                raise ValidationError(f"Missing required field: {field}", field=field)
            if data[field] is None:
                raise ValidationError(f"Required field '{field}' cannot be null", field=field)

    @staticmethod
    def validate_numeric_range(value: Any, field: str, min_value: Optional[float] = None,
                               max_value: Optional[float] = None,
                               exclusive: bool = False) -> None:
        """
        Validate numeric value is finite and within the specified range.

        Args:
            value: Numeric value to validate
            field: Field name for error reporting
            min_value: Minimum allowed value
            max_value: Maximum allowed value
            exclusive: Treat both bounds as strict

        Raises:
            ValidationError: If value is not numeric or outside the range
        """
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ValidationError(f"Field '{field}' must be numeric", field=field, value=value)
        if not math.isfinite(value):
            raise ValidationError(f"Field '{field}' must be finite", field=field, value=value)

        if min_value is not None and (value <= min_value if exclusive else value < min_value):
            relation = "greater than" if exclusive else "at least"
            raise ValidationError(f"Field '{field}' must be {relation} {min_value}",
                                  field=field, value=value)
        if max_value is not None and (value >= max_value if exclusive else value > max_value):
            relation = "less than" if exclusive else "no more than"
            raise ValidationError(f"Field '{field}' must be {relation} {max_value}",
                                  field=field, value=value)

    @staticmethod
    def validate_positive_int(value: Any, field: str, min_value: int = 1) -> None:
        """Validate an integer count (booleans rejected)."""
        if isinstance(value, bool) or not isinstance(value, int):
            raise ValidationError(f"Field '{field}' must be an integer", field=field, value=value)
        if value < min_value:
            raise ValidationError(f"Field '{field}' must be at least {min_value}", field=field,
                                  value=value)

    @staticmethod
    def validate_probability_vector(value: Any, field: str) -> None:
        """
        Validate a list of strictly positive probabilities summing to 1.

        Raises:
            ValidationError: If value is not such a list
        """
        if not isinstance(value, list) or len(value) < 2:
            raise ValidationError(f"Field '{field}' must be a list of at least 2 probabilities",
                                  field=field, value=value)
        for entry in value:
            if isinstance(entry, bool) or not isinstance(entry, (int, float)):
                raise ValidationError(f"Field '{field}' must contain numbers only", field=field,
                                      value=value)
            if not math.isfinite(entry) or entry <= 0.0:
                raise ValidationError(f"Field '{field}' entries must be positive and finite",
                                      field=field, value=value)
        total = math.fsum(value)
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise ValidationError(f"Field '{field}' must sum to 1 (got {total!r})", field=field,
                                  value=value)

    @staticmethod
    def validate_choice(value: Any, field: str, allowed_values: List[Any]) -> None:
        """
        Validate value is one of the allowed values.

        Raises:
            ValidationError: If value is not in allowed values
        """
        if value not in allowed_values:
            raise ValidationError(
                f"Field '{field}' must be one of: {', '.join(map(str, allowed_values))}",
                field=field, value=value
            )
