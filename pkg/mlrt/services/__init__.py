"""
Services package for the mismatched LRT exponent toolkit
Provides the solver layer between the models and the command-line front end
"""

from .base_service import BaseService
from .lrt_exponents import LrtExponentService
from .mismatch_exponents import DualForm, MismatchExponentService
from .worst_case import WorstCaseService
from .sensitivity import SensitivityService
from .oracle import OracleService, Side
from .experiment_orchestrator import ExperimentOrchestrator

__all__ = [
    'BaseService',
    'LrtExponentService',
    'MismatchExponentService',
    'DualForm',
    'WorstCaseService',
    'SensitivityService',
    'OracleService',
    'Side',
    'ExperimentOrchestrator',
]
