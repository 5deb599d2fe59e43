"""
Numerical and command-line utilities for the mismatched LRT exponent toolkit
"""

from .cancellation import CancellationToken
from .simplex_core import kl, llr_gap, log_ratio, tilt

__all__ = ['CancellationToken', 'kl', 'llr_gap', 'log_ratio', 'tilt']
