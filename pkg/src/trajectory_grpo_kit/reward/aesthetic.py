"""
Toy perceptual/aesthetic reward channels.

Cheap trajectory-only proxies for learned visual-quality, motion-quality
and preference scorers. Each score is a negated roughness measure, so 0 is
best.
"""

from typing import NamedTuple

import numpy as np

from ..geometry.se3 import Trajectory, geodesic_angle, relative_pose


class AestheticScores(NamedTuple):
    s_vis: float
    s_mot: float
    s_hps: float


def aesthetic_channels(t: Trajectory) -> AestheticScores:
    """(s_vis, s_mot, s_hps) for one trajectory.

    - s_mot: −mean ‖t_{i+1} − 2t_i + t_{i−1}‖ (translation smoothness)
    - s_vis: −mean ∠(Δ_i, Δ_{i+1}) over consecutive frame-to-frame
      rotations Δ_i = R_iᵀR_{i+1} (rotational jerk)
    - s_hps: −max ‖t_{i+1} − t_i‖ (largest single jump)

    Two-frame trajectories have no second difference; s_mot and s_vis are 0.
    """
    translations = t.translations
    steps = np.diff(translations, axis=0)
    s_hps = -float(np.max(np.linalg.norm(steps, axis=1)))

    if len(t) < 3:
        return AestheticScores(s_vis=0.0, s_mot=0.0, s_hps=s_hps + 0.0)

    second = np.diff(steps, axis=0)
    s_mot = -float(np.mean(np.linalg.norm(second, axis=1)))

    deltas = [relative_pose(a, b).rotation for a, b in zip(t.poses[:-1], t.poses[1:])]
    s_vis = -float(np.mean([geodesic_angle(a, b) for a, b in zip(deltas[:-1], deltas[1:])]))
    # + 0.0 keeps static trajectories at +0.0 rather than -0.0
    return AestheticScores(s_vis=s_vis + 0.0, s_mot=s_mot + 0.0, s_hps=s_hps + 0.0)
