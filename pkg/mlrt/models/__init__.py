"""
Data models for the mismatched LRT exponent toolkit
"""

from .base_model import BaseModel
from .distribution import Distribution, EmpiricalType
from .experiment import CommandReport, ExperimentConfig, SweepRow
from .exponents import ExponentPair, MismatchedResult, MismatchedTest, SteinReport, ThresholdRange
from .oracle import FiniteNResult, GridResult, GridSpec, MonteCarloResult, SimulationConfig
from .robust import (
    BallExtreme, Direction, KlBall, MonotonicityScan, QuadraticModel, SensitivityReport,
    WorstCaseSolution, WorstCaseStatus,
)
from .tolerance import ToleranceConfig

__all__ = [
    'BaseModel', 'CommandReport', 'Distribution', 'EmpiricalType', 'ExperimentConfig',
    'SweepRow', 'ExponentPair', 'MismatchedResult', 'MismatchedTest', 'SteinReport',
    'ThresholdRange',
    'FiniteNResult', 'GridResult', 'GridSpec', 'MonteCarloResult', 'SimulationConfig',
    'BallExtreme', 'Direction', 'KlBall', 'MonotonicityScan', 'QuadraticModel',
    'SensitivityReport', 'WorstCaseSolution', 'WorstCaseStatus', 'ToleranceConfig',
]
