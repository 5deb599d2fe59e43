"""
Validators for command-line configuration documents
"""

from .base_validator import BaseValidator
from .config_validator import ExperimentConfigValidator

__all__ = ['BaseValidator', 'ExperimentConfigValidator']
