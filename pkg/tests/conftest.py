"""
Shared fixtures and test configuration for trajectory-grpo-kit tests
"""

from pathlib import Path
from typing import List

import pytest

from trajectory_grpo_kit.config import RunConfig
from trajectory_grpo_kit.core.seeding import derive_seed
from trajectory_grpo_kit.geometry import Trajectory
from trajectory_grpo_kit.io import write_trajectory
from trajectory_grpo_kit.monitoring import NoOpMonitor
from trajectory_grpo_kit.policy import FlowPolicy, PolicyArchitecture, flow_pretrain, init_policy
from trajectory_grpo_kit.sampling import build_drift_corpus, generate_bank


@pytest.fixture
def smoke_config() -> RunConfig:
    """Tiny run configuration for fast tests."""
    return RunConfig.for_smoke_test()


@pytest.fixture
def small_bank(smoke_config: RunConfig) -> List[Trajectory]:
    """Eight mixed trajectories matching the smoke config's frame count."""
    return generate_bank(8, smoke_config.n_frames, seed=3, kind="mixed")


@pytest.fixture
def bank_dir(tmp_path: Path, small_bank: List[Trajectory]) -> Path:
    """``small_bank`` written as a bank directory."""
    directory = tmp_path / "bank"
    directory.mkdir()
    for k, trajectory in enumerate(small_bank):
        write_trajectory(directory / f"traj_{k:05d}.txt", trajectory)
    return directory


@pytest.fixture
def fresh_policy(smoke_config: RunConfig) -> FlowPolicy:
    """Randomly initialised policy with the smoke architecture."""
    return init_policy(PolicyArchitecture.from_config(smoke_config), seed=11, config_hash=smoke_config.config_hash())


@pytest.fixture
def pretrained_policy(smoke_config: RunConfig, small_bank: List[Trajectory]) -> FlowPolicy:
    """Policy after a short flow-matching pretraining on ``small_bank``."""
    corpus = build_drift_corpus(
        small_bank,
        smoke_config.rescale_spec(),
        (smoke_config.drift_scale_low, smoke_config.drift_scale_high),
        derive_seed(smoke_config.seed, "drift-corpus"),
    )
    return flow_pretrain(corpus, smoke_config).policy


@pytest.fixture
def mock_monitor():
    """Mock monitoring instance."""
    return NoOpMonitor()
