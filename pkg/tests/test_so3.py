import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial.transform import Rotation

from topophase.errors import (ClosureError, ContinuityError, PhysicsError,
                              TangentialTouchError)
from topophase.so3 import (BallPoint, SampledPath, UnitQuaternion, ball_point,
                           count_surface_crossings, lift_sign,
                           quat_from_axis_angle, quat_multiply,
                           random_closed_path, random_closed_segments,
                           sample_arcs, su2_gate)

THIRD = 2.0 * math.pi / 3.0
DIAG = 1.0 / math.sqrt(3.0)

X = np.array([1.0, 0.0, 0.0])
Y = np.array([0.0, 1.0, 0.0])
Z = np.array([0.0, 0.0, 1.0])


def scipy_rot(q: UnitQuaternion) -> Rotation:
    # scipy stores quaternions scalar-last
    return Rotation.from_quat(np.concatenate([q.v, [q.w]]))


def random_quat(rng) -> UnitQuaternion:
    p = rng.normal(size=4)
    p /= np.linalg.norm(p)
    return UnitQuaternion(float(p[0]), p[1:])


class TestQuaternions:
    def test_norm_enforced(self):
        with pytest.raises(PhysicsError):
            UnitQuaternion(1.0, np.array([1.0, 0.0, 0.0]))

    def test_axis_angle_construction(self):
        q = quat_from_axis_angle(np.array([-1, -1, -1]) * DIAG, THIRD)
        assert q.w == pytest.approx(0.5, abs=1e-15)
        assert np.allclose(q.v, [-0.5, -0.5, -0.5], atol=1e-15)

    def test_multiply_against_scipy(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            q1, q2 = random_quat(rng), random_quat(rng)
            prod = quat_multiply(q2, q1)
            want = (scipy_rot(q2) * scipy_rot(q1)).as_matrix()
            got = scipy_rot(prod).as_matrix()
            assert np.max(np.abs(got - want)) < 1e-12

    def test_multiply_order(self):
        # q1 acts first: rotating x by pi/2 about z then pi/2 about x
        qz = quat_from_axis_angle(Z, math.pi / 2)
        qx = quat_from_axis_angle(X, math.pi / 2)
        v = scipy_rot(quat_multiply(qx, qz)).apply([1.0, 0.0, 0.0])
        assert np.allclose(v, [0.0, 0.0, 1.0], atol=1e-15)

    def test_su2_gate_homomorphism(self):
        rng = np.random.default_rng(6)
        for _ in range(30):
            q1, q2 = random_quat(rng), random_quat(rng)
            lhs = su2_gate(quat_multiply(q2, q1)).entries
            rhs = su2_gate(q2).entries @ su2_gate(q1).entries
            assert np.max(np.abs(lhs - rhs)) < 1e-12

    def test_double_cover_sign(self):
        q = quat_from_axis_angle(Y, 0.9)
        assert np.max(np.abs(su2_gate(-q).entries + su2_gate(q).entries)) == 0.0
        # same rotation, opposite gate sign
        assert np.max(np.abs(scipy_rot(-q).as_matrix() - scipy_rot(q).as_matrix())) < 1e-15

    def test_benchmark_junction_product(self):
        # second benchmark arc after the first lands exactly on the surface
        q_ab = quat_from_axis_angle(np.array([-1, -1, -1]) * DIAG, THIRD)
        q_bf = quat_from_axis_angle(np.array([1, -1, -1]) * DIAG, THIRD)
        prod = quat_multiply(q_bf, q_ab).as_array()
        assert np.max(np.abs(prod - [0, 0, 0, -1])) < 1e-12


class TestBallPoint:
    def test_identity_maps_to_origin(self):
        p = ball_point(UnitQuaternion(1.0, np.zeros(3)))
        assert np.all(p.coords == 0.0)

    def test_against_scipy_rotvec(self):
        rng = np.random.default_rng(9)
        for _ in range(60):
            q = random_quat(rng)
            want = scipy_rot(q).as_rotvec()
            assert np.max(np.abs(ball_point(q).coords - want)) < 1e-9

    def test_antipodal_quaternions_same_point(self):
        q = quat_from_axis_angle(Y, 1.7)
        a, b = ball_point(q), ball_point(-q)
        assert np.max(np.abs(a.coords - b.coords)) < 1e-15

    def test_surface_point_keeps_computed_axis(self):
        q = UnitQuaternion(0.0, np.array([0.0, 0.0, -1.0]))
        p = ball_point(q)
        assert np.allclose(p.coords, [0.0, 0.0, -math.pi], atol=1e-15)

    def test_benchmark_waypoint_coordinates(self):
        q = quat_from_axis_angle(np.array([-1, -1, -1]) * DIAG, THIRD)
        k = 2.0 * math.pi / (3.0 * math.sqrt(3.0))
        assert np.max(np.abs(ball_point(q).coords - [-k, -k, -k])) < 1e-12

    def test_surface_antipodes_compare_equal(self):
        a = BallPoint(np.array([0.0, 0.0, math.pi]))
        b = BallPoint(np.array([0.0, 0.0, -math.pi]))
        assert a == b
        assert a.same_rotation(b)

    def test_interior_antipodes_differ(self):
        a = BallPoint(np.array([1.0, 0.0, 0.0]))
        b = BallPoint(np.array([-1.0, 0.0, 0.0]))
        assert a != b

    def test_outside_ball_rejected(self):
        with pytest.raises(PhysicsError):
            BallPoint(np.array([math.pi, math.pi, 0.0]))

    def test_axis_of_identity_undefined(self):
        with pytest.raises(PhysicsError):
            BallPoint(np.zeros(3)).axis


class TestSampledPath:
    def test_must_start_at_identity(self):
        pts = np.array([[0.0, 1.0, 0.0, 0.0], [1.0, 0.0, 0.0, 0.0]])
        with pytest.raises(PhysicsError):
            SampledPath(pts, 0.005)

    def test_discontinuity_detected(self):
        pts = np.array([[1.0, 0.0, 0.0, 0.0], [-1.0, 0.0, 0.0, 0.0]])
        with pytest.raises(ContinuityError):
            SampledPath(pts, 0.005)

    def test_step_range(self):
        with pytest.raises(PhysicsError):
            sample_arcs([(Z, math.pi)], 0.5)

    def test_segment_boundaries_are_exact(self):
        path = sample_arcs([(Z, 1.0), (X, 1.0)], 0.005)
        q1 = quat_from_axis_angle(Z, 1.0)
        q2 = quat_multiply(quat_from_axis_angle(X, 1.0), q1)
        m = math.ceil(1.0 / 0.005)
        assert np.max(np.abs(path.points[m] - q1.as_array())) < 1e-12
        assert np.max(np.abs(path.points[-1] - q2.as_array())) < 1e-12

    def test_sample_count(self):
        path = sample_arcs([(Z, 1.0)], 0.005)
        assert len(path) == math.ceil(1.0 / 0.005) + 1


class TestClosedPathInvariants:
    def test_open_path_rejected(self):
        path = sample_arcs([(Z, 1.0)], 0.005)
        with pytest.raises(ClosureError):
            lift_sign(path)
        with pytest.raises(ClosureError):
            count_surface_crossings(path)

    def test_full_turn_is_odd(self):
        path = sample_arcs([(Z, 2.0 * math.pi)], 0.005)
        assert lift_sign(path) == -1
        assert count_surface_crossings(path) == 1

    def test_full_turn_with_sample_exactly_on_surface(self):
        # step pi/400 places one sample exactly at the half turn, where
        # w = cos(pi/2) underflows below the surface-zero threshold; the
        # bridging rule must still count a single transversal crossing
        path = sample_arcs([(Z, 2.0 * math.pi)], math.pi / 400.0)
        assert abs(path.points[400, 0]) < 1e-12
        assert count_surface_crossings(path) == 1

    def test_double_turn_is_even(self):
        path = sample_arcs([(Z, 2.0 * math.pi), (Z, 2.0 * math.pi)], 0.005)
        assert lift_sign(path) == 1
        assert count_surface_crossings(path) == 2

    def test_there_and_back_touch_counts_zero(self):
        # reaches the surface at the half turn and retreats: a touch, not
        # a crossing
        path = sample_arcs([(Z, math.pi), (Z, -math.pi)], 0.005)
        assert lift_sign(path) == 1
        assert count_surface_crossings(path) == 0

    def test_sliding_arc_rejected(self):
        # after a half turn about x the lift has w = 0, and a rotation
        # about the orthogonal z axis keeps it there for a finite arc
        path = sample_arcs([(X, math.pi), (Z, math.pi), (Y, math.pi)], 0.005)
        m = math.ceil(math.pi / 0.005)
        assert float(np.max(np.abs(path.points[m:2 * m + 1, 0]))) < 1e-12
        with pytest.raises(TangentialTouchError):
            count_surface_crossings(path)

    @given(st.integers(0, 10_000))
    @settings(max_examples=80, deadline=None)
    def test_parity_matches_lift_sign(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 7))
        try:
            path = random_closed_path(seed, n, 0.005)
            crossings = count_surface_crossings(path)
        except TangentialTouchError:
            return
        parity = 1 if crossings % 2 == 0 else -1
        assert parity == lift_sign(path)

    def test_random_closed_segments_compose_to_identity(self):
        rng = np.random.default_rng(123)
        for _ in range(20):
            segs = random_closed_segments(rng, int(rng.integers(1, 7)))
            acc = UnitQuaternion(1.0, np.zeros(3))
            for axis, angle in segs:
                acc = quat_multiply(quat_from_axis_angle(axis, angle), acc)
            assert min(abs(acc.w - 1.0), abs(acc.w + 1.0)) < 1e-9
            assert float(np.linalg.norm(acc.v)) < 1e-9

    def test_reproducible(self):
        a = random_closed_path(99, 3, 0.005)
        b = random_closed_path(99, 3, 0.005)
        assert np.array_equal(a.points, b.points)
