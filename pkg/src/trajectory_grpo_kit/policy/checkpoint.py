"""
Versioned binary checkpoint for a FlowPolicy.

Layout (all integers little-endian):

    8 bytes   magic  b"TRAJGRPO"
    uint32    layout version (1)
    uint32    header length H
    H bytes   UTF-8 JSON header, sorted keys, compact:
              {"architecture": {...}, "config_hash": "...", "parameter_count": P}
    8·P bytes parameters as <f8

Equal policies serialize to identical bytes.
"""

import json
import struct
from pathlib import Path
from typing import Optional, Union

import numpy as np

from ..core.exceptions import CheckpointError, CheckpointVersionError
from ..core.logging import LoggerAdapter
from ..io.trajectory_file import atomic_write_bytes
from .network import FlowPolicy, PolicyArchitecture

_logger = LoggerAdapter.get_logger(__name__)

MAGIC = b"TRAJGRPO"
VERSION = 1
_PREFIX = struct.Struct("<8sII")


def checkpoint_bytes(policy: FlowPolicy) -> bytes:
    header = json.dumps(
        {
            "architecture": policy.architecture.to_dict(),
            "config_hash": policy.config_hash,
            "parameter_count": policy.architecture.parameter_count,
        },
        sort_keys=True,
        separators=(",", ":"),
    ).encode("utf-8")
    params = np.ascontiguousarray(policy.params, dtype="<f8").tobytes()
    return _PREFIX.pack(MAGIC, VERSION, len(header)) + header + params


def policy_from_bytes(data: bytes, path: Optional[str] = None) -> FlowPolicy:
    """Inverse of :func:`checkpoint_bytes`.

    Raises:
        CheckpointVersionError: wrong magic string or layout version
        CheckpointError: truncated file or inconsistent header
    """
    if len(data) < _PREFIX.size:
        raise CheckpointError("Checkpoint is truncated", path=path, context={"size": len(data)})
    magic, version, header_length = _PREFIX.unpack_from(data)
    if magic != MAGIC:
        raise CheckpointVersionError(found=magic, expected=MAGIC, path=path)
    if version != VERSION:
        raise CheckpointVersionError(found=version, expected=VERSION, path=path)

    start = _PREFIX.size
    try:
        header = json.loads(data[start:start + header_length].decode("utf-8"))
        architecture = PolicyArchitecture(**header["architecture"])
        count = int(header["parameter_count"])
        config_hash = str(header["config_hash"])
    except (ValueError, KeyError, TypeError) as e:
        raise CheckpointError("Checkpoint header is malformed", path=path, original_error=e)

    if count != architecture.parameter_count:
        raise CheckpointError(
            "Checkpoint parameter count does not match its architecture",
            path=path,
            context={"parameter_count": count, "expected": architecture.parameter_count},
        )
    body = data[start + header_length:]
    if len(body) != 8 * count:
        raise CheckpointError(
            "Checkpoint parameter block has the wrong size",
            path=path,
            context={"bytes": len(body), "expected": 8 * count},
        )
    params = np.frombuffer(body, dtype="<f8").astype(np.float64)
    try:
        return FlowPolicy(architecture, params, config_hash)
    except Exception as e:
        raise CheckpointError("Checkpoint parameters are invalid", path=path, original_error=e)


def save_checkpoint(path: Union[str, Path], policy: FlowPolicy) -> None:
    """Atomically write ``policy`` to ``path``."""
    try:
        atomic_write_bytes(path, checkpoint_bytes(policy))
    except OSError as e:
        raise CheckpointError("Cannot write checkpoint", path=str(path), original_error=e)
    _logger.debug(f"Checkpoint written: {path} ({policy.architecture.parameter_count} parameters)")


def load_checkpoint(path: Union[str, Path]) -> FlowPolicy:
    """Read a policy written by :func:`save_checkpoint`.

    Raises:
        FileNotFoundError: ``path`` does not exist
        CheckpointVersionError / CheckpointError: see :func:`policy_from_bytes`
    """
    path = Path(path)
    try:
        data = path.read_bytes()
    except FileNotFoundError:
        raise
    except OSError as e:
        raise CheckpointError("Cannot read checkpoint", path=str(path), original_error=e)
    return policy_from_bytes(data, path=str(path))
