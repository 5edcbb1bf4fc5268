"""
Unit tests for SO(3)/SE(3) math
"""

import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from trajectory_grpo_kit.core.exceptions import AmbiguousLogError, InvalidInputError, InvalidRotationError
from trajectory_grpo_kit.geometry import (
    Intrinsics,
    Pose,
    Rotation,
    Trajectory,
    compose,
    ensure_log_safe,
    exp_so3,
    geodesic_angle,
    hat,
    inverse,
    log_so3,
    normalize_gauge,
    relative_pose,
    rot_x,
    rot_z,
    transform_trajectory,
    vee,
)
from tests.fixtures.trajectories import make_trajectory, random_pose, random_trajectory

pytestmark = pytest.mark.unit

_component = st.floats(min_value=-1.8, max_value=1.8, allow_nan=False, allow_infinity=False)


def _random_axis_angles(rng: np.random.Generator, count: int, max_norm: float) -> np.ndarray:
    directions = rng.normal(size=(count, 3))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    return directions * rng.uniform(0.0, max_norm, size=(count, 1))


class TestRotation:
    """Tests for the Rotation value type."""

    def test_identity(self):
        """Test identity rotation matrix."""
        assert np.array_equal(Rotation.identity().m, np.eye(3))

    def test_matrix_is_read_only(self):
        """Test that the stored matrix cannot be modified."""
        r = rot_z(0.3)
        with pytest.raises(ValueError):
            r.m[0, 0] = 2.0

    def test_rejects_non_orthonormal(self):
        """Test that a scaled matrix is rejected."""
        with pytest.raises(InvalidRotationError) as exc_info:
            Rotation(2.0 * np.eye(3))
        assert exc_info.value.orthonormality_error == pytest.approx(3.0)

    def test_rejects_reflection(self):
        """Test that det = -1 is rejected."""
        with pytest.raises(InvalidRotationError) as exc_info:
            Rotation(np.diag([1.0, 1.0, -1.0]))
        assert exc_info.value.determinant == pytest.approx(-1.0)

    def test_rejects_wrong_shape(self):
        """Test that a non-3x3 input is rejected."""
        with pytest.raises(InvalidInputError):
            Rotation(np.eye(2))

    def test_rejects_non_finite(self):
        """Test that NaN entries are rejected."""
        m = np.eye(3)
        m[0, 1] = np.nan
        with pytest.raises(InvalidInputError):
            Rotation(m)

    def test_matmul_composes(self):
        """Test that @ composes rotations about one axis."""
        assert (rot_z(0.2) @ rot_z(0.3)).allclose(rot_z(0.5), atol=1e-12)


class TestExpLog:
    """Tests for exp_so3 and log_so3."""

    def test_exp_zero_is_identity(self):
        """Test exp of the zero vector."""
        assert np.array_equal(exp_so3([0.0, 0.0, 0.0]).m, np.eye(3))

    def test_exp_quarter_turn_about_z(self):
        """Test exp of (0, 0, π/2)."""
        expected = np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
        assert np.allclose(exp_so3([0.0, 0.0, math.pi / 2]).m, expected, atol=1e-12)

    def test_round_trip_about_x(self):
        """Test that log(exp((π/3, 0, 0))) recovers the vector."""
        v = np.array([math.pi / 3, 0.0, 0.0])
        assert np.allclose(log_so3(exp_so3(v)), v, atol=1e-9)

    def test_log_identity(self):
        """Test log of the identity."""
        assert np.array_equal(log_so3(Rotation.identity()), np.zeros(3))

    def test_log_z_rotation(self):
        """Test log of a rotation about z by 0.3 rad."""
        assert np.allclose(log_so3(rot_z(0.3)), [0.0, 0.0, 0.3], atol=1e-9)

    def test_log_accepts_plain_matrix(self):
        """Test that log_so3 validates and accepts a raw matrix."""
        assert np.allclose(log_so3(rot_z(0.3).m), [0.0, 0.0, 0.3], atol=1e-9)
        with pytest.raises(InvalidRotationError):
            log_so3(np.full((3, 3), 0.5))

    def test_round_trip_random(self):
        """Test exp/log round trip on 1000 random vectors with norm <= π - 0.1."""
        rng = np.random.default_rng(0)
        for v in _random_axis_angles(rng, 1000, math.pi - 0.1):
            assert np.allclose(log_so3(exp_so3(v)), v, rtol=0.0, atol=1e-9)

    @pytest.mark.slow
    def test_round_trip_large_sample(self):
        """Test exp/log round trip on 10^5 random vectors."""
        rng = np.random.default_rng(1)
        worst = 0.0
        for v in _random_axis_angles(rng, 100_000, math.pi - 0.1):
            worst = max(worst, float(np.max(np.abs(log_so3(exp_so3(v)) - v))))
        assert worst < 1e-9

    @settings(max_examples=200, deadline=None)
    @given(_component, _component, _component)
    def test_round_trip_property(self, x, y, z):
        """Test exp/log round trip on generated vectors."""
        v = np.array([x, y, z])
        assume(np.linalg.norm(v) <= math.pi - 0.1)
        assert np.allclose(log_so3(exp_so3(v)), v, rtol=0.0, atol=1e-9)

    @pytest.mark.slow
    def test_exp_orthonormal_large_sample(self):
        """Test exp_so3 gives RᵀR = I and det = +1 within 1e-9 on 10^5 random vectors."""
        rng = np.random.default_rng(5)
        worst_orthogonality = 0.0
        worst_det = 0.0
        for v in _random_axis_angles(rng, 100_000, 3.0 * math.pi):
            m = exp_so3(v).m
            worst_orthogonality = max(worst_orthogonality, float(np.max(np.abs(m.T @ m - np.eye(3)))))
            worst_det = max(worst_det, abs(float(np.linalg.det(m)) - 1.0))
        assert worst_orthogonality < 1e-9
        assert worst_det < 1e-9

    def test_small_angle_branch(self):
        """Test the Taylor branch below 1e-8 rad."""
        v = np.array([1e-10, -2e-10, 5e-11])
        r = exp_so3(v)
        assert np.allclose(r.m, np.eye(3) + hat(v), rtol=0.0, atol=1e-18)
        assert np.allclose(log_so3(r), v, rtol=1e-9, atol=0.0)

    def test_log_at_pi(self):
        """Test that log at angle π returns norm π and maps back to the same rotation."""
        r = rot_x(math.pi)
        omega = log_so3(r)
        assert np.linalg.norm(omega) == pytest.approx(math.pi, abs=1e-9)
        assert abs(omega[0]) == pytest.approx(math.pi, abs=1e-9)
        assert exp_so3(omega).allclose(r, atol=1e-9)

    def test_log_just_below_pi(self):
        """Test the near-π branch keeps the axis sign."""
        v = np.array([0.0, 0.0, math.pi - 1e-7])
        assert np.allclose(log_so3(exp_so3(v)), v, atol=1e-6)

    def test_exp_rejects_non_finite(self):
        """Test that exp_so3 rejects NaN."""
        with pytest.raises(InvalidInputError):
            exp_so3([np.nan, 0.0, 0.0])

    def test_hat_vee_inverse(self):
        """Test hat/vee are inverse maps."""
        v = np.array([0.1, -0.2, 0.3])
        k = hat(v)
        assert np.allclose(k, -k.T)
        assert np.array_equal(vee(k), v)


class TestGeodesicAngle:
    """Tests for geodesic_angle."""

    def test_identical_rotations(self):
        """Test that equal rotations give exactly 0."""
        r = rot_z(1.1) @ rot_x(0.4)
        assert geodesic_angle(r, r) == 0.0

    def test_z_rotations(self):
        """Test geodesic_angle(I, rot_z(θ)) = θ for 100 values in (0, π)."""
        identity = Rotation.identity()
        for theta in np.linspace(1e-3, math.pi - 1e-3, 100):
            assert geodesic_angle(identity, rot_z(theta)) == pytest.approx(theta, abs=1e-9)

    def test_opposite_x_rotations(self):
        """Test (rot_x(π/4), rot_x(-π/4)) → π/2."""
        assert geodesic_angle(rot_x(math.pi / 4), rot_x(-math.pi / 4)) == pytest.approx(math.pi / 2, abs=1e-12)

    def test_symmetric_and_bounded(self):
        """Test symmetry and the [0, π] range on random rotations."""
        rng = np.random.default_rng(2)
        for _ in range(50):
            a, b = (exp_so3(rng.normal(size=3)) for _ in range(2))
            angle = geodesic_angle(a, b)
            assert 0.0 <= angle <= math.pi
            assert angle == pytest.approx(geodesic_angle(b, a), abs=1e-12)

    @settings(max_examples=200, deadline=None)
    @given(*([_component] * 9))
    def test_triangle_inequality(self, ax, ay, az, bx, by, bz, cx, cy, cz):
        """Test d(a, c) <= d(a, b) + d(b, c) on generated rotations."""
        a = exp_so3([ax, ay, az])
        b = exp_so3([bx, by, bz])
        c = exp_so3([cx, cy, cz])
        assert geodesic_angle(a, c) <= geodesic_angle(a, b) + geodesic_angle(b, c) + 1e-9


class TestPoseAlgebra:
    """Tests for compose, inverse and relative_pose."""

    def test_relative_pose_to_self_is_identity(self):
        """Test relative_pose(p, p) is the identity."""
        p = random_pose(np.random.default_rng(3))
        assert relative_pose(p, p).allclose(Pose.identity(), atol=1e-12)

    def test_relative_pose_from_identity(self):
        """Test relative_pose(identity, pure translation)."""
        b = Pose(Rotation.identity(), [1.0, 0.0, 0.0])
        result = relative_pose(Pose.identity(), b)
        assert np.allclose(result.translation, [1.0, 0.0, 0.0])
        assert result.rotation.allclose(Rotation.identity())

    def test_compose_relative_reproduces_target(self):
        """Test compose(a, relative_pose(a, b)) == b."""
        rng = np.random.default_rng(4)
        for _ in range(100):
            a, b = random_pose(rng), random_pose(rng)
            assert compose(a, relative_pose(a, b)).allclose(b, atol=1e-9)

    def test_inverse(self):
        """Test p ∘ p⁻¹ is the identity."""
        p = random_pose(np.random.default_rng(5))
        assert compose(p, inverse(p)).allclose(Pose.identity(), atol=1e-12)

    def test_pose_rejects_bad_translation(self):
        """Test that a 2-vector translation is rejected."""
        with pytest.raises(InvalidInputError) as exc_info:
            Pose(Rotation.identity(), [1.0, 2.0])
        assert exc_info.value.field_name == "translation"


class TestTrajectory:
    """Tests for the Trajectory value type."""

    def test_requires_two_poses(self):
        """Test that a single pose is rejected."""
        with pytest.raises(InvalidInputError):
            Trajectory((Pose.identity(),))

    def test_intrinsics_length_must_match(self):
        """Test that intrinsics count must equal the frame count."""
        k = Intrinsics(500.0, 500.0, 320.0, 240.0)
        with pytest.raises(InvalidInputError):
            Trajectory((Pose.identity(), Pose.identity()), intrinsics=(k,))

    def test_intrinsics_positive_focal(self):
        """Test that fx <= 0 is rejected."""
        with pytest.raises(InvalidInputError):
            Intrinsics(0.0, 500.0, 320.0, 240.0)

    def test_frame_rate_positive(self):
        """Test that a non-positive frame rate is rejected."""
        with pytest.raises(InvalidInputError):
            Trajectory((Pose.identity(), Pose.identity()), frame_rate=0.0)

    def test_from_arrays(self):
        """Test construction from stacked arrays."""
        t = Trajectory.from_arrays(np.stack([np.eye(3), rot_z(0.1).m]), np.array([[0, 0, 0], [1, 2, 3]], dtype=float))
        assert len(t) == 2
        assert np.allclose(t.translations[1], [1, 2, 3])
        assert np.allclose(t.rotations[1], rot_z(0.1).m)


class TestNormalizeGauge:
    """Tests for normalize_gauge."""

    def test_identity_start_unchanged(self):
        """Test a trajectory starting at identity is unchanged."""
        t = make_trajectory([[0, 0, 0], [1, 0, 0], [1, 1, 0]], [Rotation.identity(), rot_z(0.1), rot_z(0.2)])
        assert normalize_gauge(t).allclose(t, atol=1e-12)

    def test_first_pose_identity(self):
        """Test the first pose becomes the identity."""
        t = random_trajectory(np.random.default_rng(6))
        assert normalize_gauge(t).poses[0].allclose(Pose.identity(), atol=1e-12)

    def test_pairwise_distances_preserved(self):
        """Test frame-to-frame angles and distances are preserved."""
        rng = np.random.default_rng(7)
        for _ in range(10):
            t = random_trajectory(rng, n_frames=6)
            n = normalize_gauge(t)
            for i in range(len(t)):
                for j in range(len(t)):
                    assert geodesic_angle(n[i].rotation, n[j].rotation) == pytest.approx(
                        geodesic_angle(t[i].rotation, t[j].rotation), abs=1e-9
                    )
                    assert np.linalg.norm(n[i].translation - n[j].translation) == pytest.approx(
                        np.linalg.norm(t[i].translation - t[j].translation), abs=1e-9
                    )

    def test_idempotent(self):
        """Test normalizing twice equals normalizing once."""
        n = normalize_gauge(random_trajectory(np.random.default_rng(8)))
        assert normalize_gauge(n).allclose(n, atol=1e-12)

    def test_world_frame_change_invariant(self):
        """Test a rigid change of world frame leaves the normalized trajectory unchanged."""
        rng = np.random.default_rng(9)
        t = random_trajectory(rng)
        g = random_pose(rng)
        assert normalize_gauge(transform_trajectory(g, t)).allclose(normalize_gauge(t), atol=1e-9)


class TestEnsureLogSafe:
    """Tests for ensure_log_safe."""

    def test_raises_near_pi(self):
        """Test that a rotation at π is flagged with its frame index."""
        t = make_trajectory([[0, 0, 0], [0, 0, 0]], [Rotation.identity(), rot_z(math.pi)])
        with pytest.raises(AmbiguousLogError) as exc_info:
            ensure_log_safe(t, operation="test")
        assert exc_info.value.frame_index == 1

    def test_passes_small_rotations(self):
        """Test ordinary rotations pass."""
        ensure_log_safe(make_trajectory([[0, 0, 0], [0, 0, 0]], [Rotation.identity(), rot_z(3.0)]), operation="test")
