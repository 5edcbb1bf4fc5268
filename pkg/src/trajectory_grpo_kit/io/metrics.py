"""
Metrics stream: one JSON object per line, UTF-8, keys sorted.
"""

import threading
from pathlib import Path
from typing import Any, Mapping, Optional, TextIO, Union

from ..core.exceptions import TrajectoryIOError
from .serialization import to_json_line


def emit_metrics(record: Mapping[str, Any]) -> str:
    """Render one metrics record as a single line of JSON (no newline).

    Examples:
        >>> emit_metrics({"iteration": 0, "surrogate": 0.5})
        '{"iteration":0,"surrogate":0.5}'
    """
    return to_json_line(record)


class MetricsSink:
    """Append-only, thread-safe writer of metrics lines.

    Accepts an open text stream or a path (opened for writing, truncated).
    Writes are serialized under a lock and flushed per record.

    Examples:
        >>> with MetricsSink("metrics.jsonl") as sink:
        ...     sink.emit({"iteration": 0})
    """

    def __init__(self, target: Union[str, Path, TextIO, None] = None):
        self._lock = threading.Lock()
        self._owned = False
        self._stream: Optional[TextIO] = None
        self.count = 0
        if isinstance(target, (str, Path)):
            try:
                self._stream = open(target, "w", encoding="utf-8", newline="\n")
            except OSError as e:
                raise TrajectoryIOError("Cannot open metrics file", source=str(target), original_error=e)
            self._owned = True
        else:
            self._stream = target

    def emit(self, record: Mapping[str, Any]) -> str:
        line = emit_metrics(record)
        with self._lock:
            if self._stream is not None:
                self._stream.write(line + "\n")
                self._stream.flush()
            self.count += 1
        return line

    def close(self) -> None:
        with self._lock:
            if self._owned and self._stream is not None:
                self._stream.close()
            self._stream = None

    def __enter__(self) -> "MetricsSink":
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        self.close()
