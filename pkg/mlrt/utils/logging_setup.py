"""
Logging configuration shared by the CLI and scripts.
"""

import logging
import sys
from typing import List, Optional

from mlrt.config import Config, config as default_config


def configure_logging(settings: Optional[Config] = None, level: Optional[str] = None) -> None:
    """Configure root logging from config; diagnostics go to stderr."""
    settings = settings or default_config
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if settings.LOG_FILE:
        handlers.append(logging.FileHandler(settings.LOG_FILE))

    logging.basicConfig(
        level=getattr(logging, level.upper()) if level else settings.log_level,
        format=settings.LOG_FORMAT,
        handlers=handlers,
        force=True,
    )
