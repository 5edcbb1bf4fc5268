"""
Base interface for training metrics collection.

Every monitoring backend implements this interface so the trainer can
report to Prometheus, a custom system, or nothing at all.
"""

from abc import ABC, abstractmethod
from enum import Enum
from typing import Any, Dict, Mapping, Optional


class MetricType(Enum):
    """Metric types supported by monitoring systems."""
    COUNTER = "counter"
    GAUGE = "gauge"
    HISTOGRAM = "histogram"


class BaseMonitor(ABC):
    """Base class for monitoring implementations.

    The generic ``increment``/``set_gauge``/``observe_histogram`` methods
    back the training-specific ``record_*`` hooks, which the trainer calls
    once per iteration, per validation pass and per error.

    Implementations:
        - PrometheusMonitor: Prometheus-compatible metrics
        - NoOpMonitor: No-op implementation (default)
    """

    @abstractmethod
    def increment(
        self,
        name: str,
        value: float = 1.0,
        labels: Optional[Dict[str, str]] = None
    ) -> None:
        """Increment a counter metric."""
        pass

    @abstractmethod
    def set_gauge(
        self,
        name: str,
        value: float,
        labels: Optional[Dict[str, str]] = None
    ) -> None:
        """Set a gauge metric."""
        pass

    @abstractmethod
    def observe_histogram(
        self,
        name: str,
        value: float,
        labels: Optional[Dict[str, str]] = None
    ) -> None:
        """Observe a histogram metric."""
        pass

    @abstractmethod
    def record_iteration(
        self,
        iteration: int,
        reward_means: Mapping[str, float],
        surrogate: float,
        duration: float
    ) -> None:
        """Record one finished GRPO iteration."""
        pass

    @abstractmethod
    def record_validation(self, iteration: int, report: Any) -> None:
        """Record a ValidationReport taken after ``iteration``."""
        pass

    @abstractmethod
    def record_error(
        self,
        error_type: str,
        phase: Optional[str] = None
    ) -> None:
        """Record an error occurrence."""
        pass
