"""
File formats for trajectory-grpo-kit
"""

from .trajectory_file import (
    atomic_write_bytes,
    matrix_to_quaternion,
    parse_trajectory,
    quaternion_to_matrix,
    read_trajectory,
    read_trajectory_bank,
    serialize_trajectory,
    write_trajectory,
)
from .metrics import MetricsSink, emit_metrics
from .serialization import to_json_line

__all__ = [
    'atomic_write_bytes',
    'matrix_to_quaternion',
    'parse_trajectory',
    'quaternion_to_matrix',
    'read_trajectory',
    'read_trajectory_bank',
    'serialize_trajectory',
    'write_trajectory',
    'MetricsSink',
    'emit_metrics',
    'to_json_line',
]
