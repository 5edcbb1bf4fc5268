"""
Monitoring Module - Training Metrics Interface

Pluggable metrics collection for training runs, orthogonal to the JSON-lines
metrics stream (which is always written).

Supported Implementations:
    - PrometheusMonitor: Prometheus gauges/histograms (requires prometheus-client)
    - NoOpMonitor: No-op implementation (default, no dependencies)
    - Custom: Implement BaseMonitor for another backend

Usage:
    >>> from trajectory_grpo_kit.monitoring import NoOpMonitor
    >>> monitor = NoOpMonitor()
    >>> monitor.record_iteration(0, {"trans": -0.1}, surrogate=0.0, duration=0.5)
"""

from .base import BaseMonitor, MetricType
from .noop import NoOpMonitor

# PrometheusMonitor is None without prometheus-client
from .prometheus import PROMETHEUS_AVAILABLE, PrometheusMonitor

if not PROMETHEUS_AVAILABLE:
    PrometheusMonitor = None  # noqa: F811

__all__ = [
    'BaseMonitor',
    'MetricType',
    'NoOpMonitor',
    'PROMETHEUS_AVAILABLE',
]

if PROMETHEUS_AVAILABLE:
    __all__.append('PrometheusMonitor')
