"""
No-op monitoring implementation (default).
"""

from typing import Any, Dict, Mapping, Optional

from .base import BaseMonitor


class NoOpMonitor(BaseMonitor):
    """Monitor that records nothing.

    Used whenever no monitor is passed to the trainer.

    Examples:
        >>> monitor = NoOpMonitor()
        >>> monitor.increment("iterations_total")  # Does nothing
    """

    def increment(self, name: str, value: float = 1.0, labels: Optional[Dict[str, str]] = None) -> None:
        pass

    def set_gauge(self, name: str, value: float, labels: Optional[Dict[str, str]] = None) -> None:
        pass

    def observe_histogram(self, name: str, value: float, labels: Optional[Dict[str, str]] = None) -> None:
        pass

    def record_iteration(self, iteration: int, reward_means: Mapping[str, float], surrogate: float, duration: float) -> None:
        pass

    def record_validation(self, iteration: int, report: Any) -> None:
        pass

    def record_error(self, error_type: str, phase: Optional[str] = None) -> None:
        pass
