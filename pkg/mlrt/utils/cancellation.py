"""
Cooperative cancellation for long-running solves
"""

import threading
from typing import Optional

from mlrt.exceptions import SolveCancelledError


class CancellationToken:
    """Thread-safe flag checked by solvers between function evaluations."""

    def __init__(self) -> None:
        self._event = threading.Event()

    def cancel(self) -> None:
        self._event.set()

    @property
    def cancelled(self) -> bool:
        return self._event.is_set()

    def raise_if_cancelled(self, operation: Optional[str] = None) -> None:
        if self._event.is_set():
            raise SolveCancelledError(operation=operation)
