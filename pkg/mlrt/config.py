"""
Centralized configuration for the mismatched LRT exponent toolkit.
Values are read from the environment after loading an optional .env file.
"""

import logging
import os
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

from mlrt.exceptions import ConfigurationError

PROJECT_ROOT = Path(__file__).resolve().parent.parent

load_dotenv(PROJECT_ROOT / '.env')

_LOG_LEVELS = ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL')


def _env_float(key: str, default: float) -> float:
    raw = os.environ.get(key)
    if raw is None or raw.strip() == '':
        return default
    try:
        value = float(raw)
    except ValueError:
        raise ConfigurationError(f"{key} must be a number, got '{raw}'", config_key=key)
    if not value > 0:
        raise ConfigurationError(f"{key} must be positive, got {value}", config_key=key)
    return value


def _env_int(key: str, default: int) -> int:
    raw = os.environ.get(key)
    if raw is None or raw.strip() == '':
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ConfigurationError(f"{key} must be an integer, got '{raw}'", config_key=key)
    if value < 1:
        raise ConfigurationError(f"{key} must be >= 1, got {value}", config_key=key)
    return value


class Config:
    """Environment-driven settings, read once per instance."""

    def __init__(self) -> None:
        self.ENV = os.environ.get('MLRT_ENV', 'development')

        self.LOG_LEVEL = os.environ.get('MLRT_LOG_LEVEL', 'INFO').upper()
        if self.LOG_LEVEL not in _LOG_LEVELS:
            raise ConfigurationError(
                f"MLRT_LOG_LEVEL must be one of {', '.join(_LOG_LEVELS)}",
                config_key='MLRT_LOG_LEVEL'
            )
        self.LOG_FORMAT = os.environ.get(
            'MLRT_LOG_FORMAT', '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
        )
        self.LOG_FILE: Optional[str] = os.environ.get('MLRT_LOG_FILE') or None

        # Solver defaults
        self.ABS_TOL = _env_float('MLRT_ABS_TOL', 1e-10)
        self.REL_TOL = _env_float('MLRT_REL_TOL', 1e-9)
        self.MAX_ITER = _env_int('MLRT_MAX_ITER', 200)

        self.WORKERS = _env_int('MLRT_WORKERS', 1)

    @property
    def log_level(self) -> int:
        return getattr(logging, self.LOG_LEVEL)

    def tolerance(self):
        """Default ToleranceConfig built from the environment."""
        from mlrt.models.tolerance import ToleranceConfig
        return ToleranceConfig(abs_tol=self.ABS_TOL, rel_tol=self.REL_TOL, max_iter=self.MAX_ITER)


config = Config()
