"""
Trajectory text files.

One record per line::

    timestamp tx ty tz qx qy qz qw [fx fy cx cy]

Whitespace-separated, ``#`` starts a comment, LF line endings. Quaternions
are Hamilton, scalar-last; poses are camera-to-world. The four optional
intrinsics columns are all-or-nothing across a file. Quaternions within
1e-3 of unit norm are renormalized, anything further off is rejected.
"""

import math
import os
import tempfile
from pathlib import Path
from typing import BinaryIO, List, Optional, TextIO, Union

import numpy as np
from scipy.spatial.transform import Rotation as ScipyRotation
from typing_extensions import TypeAlias

from ..core.exceptions import (
    InvalidInputError,
    TrajectoryIOError,
    TrajectoryParseError,
    TrajectoryValidationError,
)
from ..core.logging import LoggerAdapter
from ..geometry.se3 import Intrinsics, Pose, Rotation, Trajectory

QUATERNION_NORM_TOL = 1e-3
SIGNIFICANT_DIGITS = 12

_POSE_FIELDS = 8
_INTRINSICS_FIELDS = 12

Source: TypeAlias = Union[str, bytes, TextIO, BinaryIO]

_logger = LoggerAdapter.get_logger(__name__)


def _read_text(source: Source) -> str:
    if isinstance(source, bytes):
        return source.decode("utf-8")
    if isinstance(source, str):
        return source
    data = source.read()
    return data.decode("utf-8") if isinstance(data, bytes) else data


def _format_number(value: float) -> str:
    # + 0.0 folds -0.0 into 0.0 so signs of zero never reach the file
    return f"{float(value) + 0.0:.{SIGNIFICANT_DIGITS}g}"


def quaternion_to_matrix(q: np.ndarray) -> np.ndarray:
    """Unit scalar-last quaternion → 3×3 rotation matrix."""
    return ScipyRotation.from_quat(q).as_matrix()


def matrix_to_quaternion(m: np.ndarray) -> np.ndarray:
    """Rotation matrix → scalar-last unit quaternion with qw ≥ 0.

    At qw = 0 the first nonzero vector component is made positive so the
    output is unique.
    """
    q = ScipyRotation.from_matrix(m).as_quat()
    if q[3] < 0.0 or (q[3] == 0.0 and q[np.flatnonzero(q[:3])[0]] < 0.0):
        q = -q
    return q


# ============================================================================
# PARSE / SERIALIZE
# ============================================================================

def _parse_line(line: str, line_number: int, source: Optional[str]) -> List[float]:
    fields = line.split()
    if len(fields) not in (_POSE_FIELDS, _INTRINSICS_FIELDS):
        raise TrajectoryParseError(
            line_number=line_number,
            line=line,
            reason=f"expected {_POSE_FIELDS} or {_INTRINSICS_FIELDS} fields, got {len(fields)}",
            source=source,
        )
    try:
        values = [float(field) for field in fields]
    except ValueError as e:
        raise TrajectoryParseError(line_number=line_number, line=line, reason="non-numeric field", source=source, original_error=e)
    if not all(math.isfinite(v) for v in values):
        raise TrajectoryParseError(line_number=line_number, line=line, reason="non-finite field", source=source)
    return values


def parse_trajectory(source: Source, frame_rate: Optional[float] = None, name: Optional[str] = None) -> Trajectory:
    """Parse a trajectory stream.

    Args:
        source: Text, bytes or an open (text or binary) file
        frame_rate: Override for the frame-rate metadata; inferred from
            the timestamp span when omitted
        name: Label used in error messages (usually the file path)

    Raises:
        TrajectoryParseError: malformed line (carries line_number)
        TrajectoryValidationError: bad quaternion norm, non-increasing
            timestamps, mixed column counts or fewer than 2 records
    """
    records = []
    for line_number, raw_line in enumerate(_read_text(source).split("\n"), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if line:
            records.append((line_number, raw_line.strip(), _parse_line(line, line_number, name)))

    if len(records) < 2:
        raise TrajectoryValidationError(f"Trajectory needs at least 2 records, found {len(records)}", source=name)

    width = len(records[0][2])
    timestamps = []
    poses = []
    intrinsics = [] if width == _INTRINSICS_FIELDS else None
    for line_number, line, values in records:
        if len(values) != width:
            raise TrajectoryValidationError(
                f"Line has {len(values)} fields but the file started with {width}",
                line_number=line_number,
                source=name,
            )
        if timestamps and values[0] <= timestamps[-1]:
            raise TrajectoryValidationError(
                f"Timestamp {values[0]!r} does not increase (previous {timestamps[-1]!r})",
                line_number=line_number,
                source=name,
            )
        q = np.array(values[4:8])
        norm = float(np.linalg.norm(q))
        if abs(norm - 1.0) > QUATERNION_NORM_TOL:
            raise TrajectoryValidationError(
                f"Quaternion norm {norm:.6g} is not within {QUATERNION_NORM_TOL} of 1",
                line_number=line_number,
                source=name,
            )
        timestamps.append(values[0])
        try:
            poses.append(Pose(Rotation(quaternion_to_matrix(q / norm)), values[1:4]))
            if intrinsics is not None:
                intrinsics.append(Intrinsics(*values[8:12]))
        except InvalidInputError as e:
            raise TrajectoryValidationError(str(e), line_number=line_number, source=name) from e

    if frame_rate is None:
        # rounded so a rate written as i/rate reads back as the same float
        frame_rate = float(f"{(len(timestamps) - 1) / (timestamps[-1] - timestamps[0]):.9g}")
    return Trajectory(tuple(poses), tuple(intrinsics) if intrinsics is not None else None, frame_rate)


def serialize_trajectory(t: Trajectory) -> bytes:
    """Render ``t`` as UTF-8 bytes; timestamps are ``i / frame_rate``.

    Output is byte-identical for equal input.
    """
    lines = []
    for index, pose in enumerate(t.poses):
        values = [index / t.frame_rate, *pose.translation, *matrix_to_quaternion(pose.rotation.m)]
        if t.intrinsics is not None:
            k = t.intrinsics[index]
            values.extend((k.fx, k.fy, k.cx, k.cy))
        lines.append(" ".join(_format_number(v) for v in values))
    return ("\n".join(lines) + "\n").encode("utf-8")


# ============================================================================
# FILES
# ============================================================================

def read_trajectory(path: Union[str, Path], frame_rate: Optional[float] = None) -> Trajectory:
    """Read a trajectory file.

    Raises:
        FileNotFoundError: path does not exist
        TrajectoryIOError: any other read failure
    """
    path = Path(path)
    try:
        data = path.read_bytes()
    except FileNotFoundError:
        raise
    except OSError as e:
        raise TrajectoryIOError("Cannot read trajectory file", source=str(path), original_error=e)
    return parse_trajectory(data, frame_rate=frame_rate, name=str(path))


def atomic_write_bytes(path: Union[str, Path], data: bytes) -> None:
    """Write ``data`` to ``path`` via a temporary file and rename."""
    path = Path(path)
    handle, tmp_name = tempfile.mkstemp(dir=str(path.parent), prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(handle, "wb") as stream:
            stream.write(data)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise


def write_trajectory(path: Union[str, Path], t: Trajectory) -> None:
    """Serialize ``t`` to ``path``; the file appears complete or not at all."""
    try:
        atomic_write_bytes(path, serialize_trajectory(t))
    except OSError as e:
        raise TrajectoryIOError("Cannot write trajectory file", source=str(path), original_error=e)


def read_trajectory_bank(directory: Union[str, Path], frame_rate: Optional[float] = None) -> List[Trajectory]:
    """Read every ``*.txt`` trajectory in ``directory``, sorted by file name.

    Raises:
        FileNotFoundError: directory does not exist
        TrajectoryValidationError: no trajectory files found
    """
    directory = Path(directory)
    if not directory.exists():
        raise FileNotFoundError(str(directory))
    if not directory.is_dir():
        raise TrajectoryIOError("Bank path is not a directory", source=str(directory))
    paths = sorted(p for p in directory.iterdir() if p.suffix == ".txt" and p.is_file())
    if not paths:
        raise TrajectoryValidationError("Trajectory bank is empty", source=str(directory))
    bank = [read_trajectory(p, frame_rate) for p in paths]
    _logger.debug(f"Read {len(bank)} trajectories from {directory}")
    return bank
