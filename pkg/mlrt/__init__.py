"""
Error exponents of matched and mismatched likelihood ratio tests
Exact exponents, least-favorable distributions in KL balls and their
small-radius sensitivity, with brute-force oracles to check them.
"""

__version__ = '1.0.0'

from .exceptions import (
    ConfigurationError, DomainError, InfeasibleProblemError, MlrtException, SizeError,
    SolveCancelledError, SolverError, ThresholdRangeError, UnboundedLambdaError, ValidationError,
)
from .models import Distribution, ExponentPair, MismatchedTest, ToleranceConfig
from .services import (
    LrtExponentService, MismatchExponentService, OracleService, SensitivityService,
    WorstCaseService,
)

__all__ = [
    '__version__',
    'MlrtException', 'ValidationError', 'DomainError', 'ThresholdRangeError',
    'UnboundedLambdaError', 'SolverError', 'InfeasibleProblemError', 'SizeError',
    'ConfigurationError', 'SolveCancelledError',
    'Distribution', 'ExponentPair', 'MismatchedTest', 'ToleranceConfig',
    'LrtExponentService', 'MismatchExponentService', 'WorstCaseService', 'SensitivityService',
    'OracleService',
]
