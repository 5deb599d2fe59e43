"""
Error handling utilities for the command-line front end.
Maps toolkit exceptions to process exit codes and JSON diagnostics on stderr.
"""

import functools
import json
import logging
import sys
from typing import Any, Callable, Dict, Optional

from mlrt.exceptions import (
    ConfigurationError, InfeasibleProblemError, MlrtException, SizeError, SolveCancelledError,
    SolverError, ThresholdRangeError, UnboundedLambdaError, ValidationError,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_INFEASIBLE = 4


def write_error(message: str, error_code: str = "GENERAL_ERROR",
                details: Optional[Dict[str, Any]] = None) -> None:
    """Write a standardized error document to stderr."""
    payload: Dict[str, Any] = {'success': False, 'error': message, 'error_code': error_code}
    if details:
        payload['details'] = details
    sys.stderr.write(json.dumps(payload, default=str) + "\n")


def handle_cli_errors(f: Callable[..., int]) -> Callable[..., int]:
    """
    Decorator turning exceptions of a subcommand into exit codes.

    Usage:
        @handle_cli_errors
        def main(argv=None) -> int:
            ...
    """
    @functools.wraps(f)
    def decorated_function(*args, **kwargs) -> int:
        try:
            return f(*args, **kwargs)
        except (ConfigurationError, ValidationError) as e:
            logger.warning(f"Configuration error in {f.__name__}: {e.message}")
            write_error(e.message, e.error_code, e.details)
            return EXIT_CONFIG
        except (SolverError, SolveCancelledError) as e:
            logger.error(f"Solver error in {f.__name__}: {e.message}")
            write_error(e.message, e.error_code, e.details)
            return EXIT_SOLVER
        except (InfeasibleProblemError, UnboundedLambdaError, ThresholdRangeError,
                SizeError) as e:
            logger.warning(f"Infeasible problem in {f.__name__}: {e.message}")
            write_error(e.message, e.error_code, e.details)
            return EXIT_INFEASIBLE
        except MlrtException as e:
            logger.error(f"Application error in {f.__name__}: {e.message}")
            write_error(e.message, e.error_code, e.details)
            return EXIT_INFEASIBLE
        except Exception as e:
            logger.error(f"Unexpected error in {f.__name__}: {str(e)}", exc_info=True)
            write_error('Internal error', 'INTERNAL_ERROR')
            return EXIT_INTERNAL
    return decorated_function
