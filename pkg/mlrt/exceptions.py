"""
Custom exception classes for the mismatched LRT exponent toolkit.
Provides consistent error handling across models, solvers and the CLI.
"""

from typing import Any, Dict, Optional


class MlrtException(Exception):
    """Base exception for the toolkit."""

    def __init__(self, message: str, error_code: Optional[str] = None,
                 details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.error_code = error_code or "GENERAL_ERROR"
        self.details = details or {}

    def to_dict(self) -> Dict[str, Any]:
        """Convert exception to dictionary format for CLI diagnostics."""
        return {
            'error': self.message,
            'error_code': self.error_code,
            'details': self.details
        }


class ValidationError(MlrtException):
    """Raised when an argument or config field fails validation."""

    def __init__(self, message: str, field: Optional[str] = None, value: Optional[Any] = None):
        super().__init__(message, "VALIDATION_ERROR")
        self.field = field
        self.value = value
        if field:
            self.details['field'] = field
        if value is not None:
            self.details['value'] = value


class DomainError(MlrtException):
    """Raised when a distribution has zero or non-finite mass where positivity is required."""

    def __init__(self, message: str, field: Optional[str] = None):
        super().__init__(message, "DOMAIN_ERROR")
        self.field = field
        if field:
            self.details['field'] = field


class ThresholdRangeError(MlrtException):
    """Raised when a threshold lies outside the admissible interval."""

    def __init__(self, message: str, endpoint: str, bound: float, value: float):
        super().__init__(message, "THRESHOLD_RANGE_ERROR")
        self.endpoint = endpoint
        self.bound = bound
        self.value = value
        self.details.update({'endpoint': endpoint, 'bound': bound, 'value': value})


class UnboundedLambdaError(MlrtException):
    """Raised when the tilt parameter cannot be bracketed (empty or supremal half-space)."""

    def __init__(self, message: str, threshold: Optional[float] = None,
                 supremum: Optional[float] = None):
        super().__init__(message, "UNBOUNDED_LAMBDA")
        if threshold is not None:
            self.details['threshold'] = threshold
        if supremum is not None:
            self.details['supremum'] = supremum


class SolverError(MlrtException):
    """Raised when an iterative solve does not converge."""

    def __init__(self, message: str, last_iterate: Optional[Any] = None,
                 residuals: Optional[Dict[str, float]] = None):
        super().__init__(message, "SOLVER_ERROR")
        self.last_iterate = last_iterate
        self.residuals = residuals or {}
        if last_iterate is not None:
            self.details['last_iterate'] = last_iterate
        if residuals:
            self.details['residuals'] = self.residuals


class InfeasibleProblemError(MlrtException):
    """Raised when a problem has no feasible point or is degenerate."""

    def __init__(self, message: str, problem: Optional[str] = None):
        super().__init__(message, "INFEASIBLE")
        self.problem = problem
        if problem:
            self.details['problem'] = problem


class SizeError(MlrtException):
    """Raised when an enumeration exceeds its combinatorial budget."""

    def __init__(self, message: str, size: int, budget: int):
        super().__init__(message, "SIZE_ERROR")
        self.size = size
        self.budget = budget
        self.details.update({'size': size, 'budget': budget})


class ConfigurationError(MlrtException):
    """Raised when configuration is invalid or missing."""

    def __init__(self, message: str, config_key: Optional[str] = None,
                 line: Optional[int] = None):
        super().__init__(message, "CONFIGURATION_ERROR")
        self.config_key = config_key
        self.line = line
        if config_key:
            self.details['config_key'] = config_key
        if line is not None:
            self.details['line'] = line


class SolveCancelledError(MlrtException):
    """Raised when a cooperative cancellation token fires during a solve."""

    def __init__(self, message: str = "Solve cancelled", operation: Optional[str] = None):
        super().__init__(message, "CANCELLED")
        if operation:
            self.details['operation'] = operation
