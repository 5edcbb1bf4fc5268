"""
Unit tests for policy checkpoints
"""

import struct

import numpy as np
import pytest

from trajectory_grpo_kit.core.exceptions import CheckpointError, CheckpointVersionError
from trajectory_grpo_kit.policy import (
    MAGIC,
    VERSION,
    checkpoint_bytes,
    load_checkpoint,
    policy_from_bytes,
    save_checkpoint,
)

pytestmark = pytest.mark.unit


class TestCheckpointBytes:
    """Tests for the in-memory checkpoint codec."""

    def test_prefix(self, fresh_policy):
        """Test the magic string and version lead the layout."""
        data = checkpoint_bytes(fresh_policy)
        assert data[:8] == MAGIC
        assert struct.unpack_from("<I", data, 8)[0] == VERSION

    def test_round_trip(self, fresh_policy):
        """Test decoding restores parameters, architecture and hash exactly."""
        restored = policy_from_bytes(checkpoint_bytes(fresh_policy))
        assert np.array_equal(restored.params, fresh_policy.params)
        assert restored.architecture == fresh_policy.architecture
        assert restored.config_hash == fresh_policy.config_hash

    def test_bytes_stable(self, fresh_policy):
        """Test re-encoding a decoded policy reproduces the bytes."""
        data = checkpoint_bytes(fresh_policy)
        assert checkpoint_bytes(policy_from_bytes(data)) == data

    def test_bad_magic(self, fresh_policy):
        """Test a foreign file is rejected."""
        data = b"NOTAPOLI" + checkpoint_bytes(fresh_policy)[8:]
        with pytest.raises(CheckpointVersionError):
            policy_from_bytes(data)

    def test_bad_version(self, fresh_policy):
        """Test an unknown layout version."""
        data = bytearray(checkpoint_bytes(fresh_policy))
        struct.pack_into("<I", data, 8, VERSION + 1)
        with pytest.raises(CheckpointVersionError) as exc_info:
            policy_from_bytes(bytes(data))
        assert exc_info.value.found == VERSION + 1

    def test_truncated(self, fresh_policy):
        """Test a checkpoint cut short."""
        with pytest.raises(CheckpointError):
            policy_from_bytes(checkpoint_bytes(fresh_policy)[:-8])
        with pytest.raises(CheckpointError):
            policy_from_bytes(MAGIC)

    def test_malformed_header(self, fresh_policy):
        """Test a header that is not JSON."""
        header = b"{not json"
        data = struct.pack("<8sII", MAGIC, VERSION, len(header)) + header
        with pytest.raises(CheckpointError):
            policy_from_bytes(data)


class TestCheckpointFiles:
    """Tests for save_checkpoint and load_checkpoint."""

    def test_save_and_load(self, tmp_path, fresh_policy):
        """Test a file round trip is bit-exact."""
        path = tmp_path / "policy.ckpt"
        save_checkpoint(path, fresh_policy)
        assert path.read_bytes() == checkpoint_bytes(fresh_policy)
        assert np.array_equal(load_checkpoint(path).params, fresh_policy.params)

    def test_missing_file(self, tmp_path):
        """Test a missing checkpoint raises FileNotFoundError."""
        with pytest.raises(FileNotFoundError):
            load_checkpoint(tmp_path / "missing.ckpt")

    def test_error_names_path(self, tmp_path):
        """Test errors carry the file path."""
        path = tmp_path / "bad.ckpt"
        path.write_bytes(b"garbage")
        with pytest.raises(CheckpointError) as exc_info:
            load_checkpoint(path)
        assert exc_info.value.path == str(path)
