import json
import math

import numpy as np
import pytest
from scipy.linalg import expm

from topophase.errors import ClosureError, PhysicsError, SchemaError
from topophase.quantum import SIGMA_X, SIGMA_Y, SIGMA_Z
from topophase.so3 import count_surface_crossings, lift_sign
from topophase.trajectories import (Segment, Trajectory, catalog, concatenate,
                                    composed_rotation_angle, load_trajectory,
                                    minus_trajectory, perturbed_trajectory,
                                    plus_trajectory, random_trajectory,
                                    reversed_trajectory, sample,
                                    save_trajectory, segment_unitary,
                                    trajectory_quaternion)

DIAG = 1.0 / math.sqrt(3.0)


def gate_product(traj):
    u = np.eye(2, dtype=complex)
    for seg in traj.segments:
        u = segment_unitary(seg).entries @ u
    return u


class TestSegments:
    def test_axis_normalization_enforced(self):
        with pytest.raises(PhysicsError):
            Segment(np.array([1.0, 1.0, 0.0]), 0.5)

    def test_angle_bound(self):
        with pytest.raises(PhysicsError):
            Segment(np.array([0.0, 0.0, 1.0]), 7.0)

    def test_unitary_matches_matrix_exponential(self):
        seg = Segment(np.array([-1, -1, -1]) * DIAG, 2 * math.pi / 3)
        h = DIAG * (-SIGMA_X - SIGMA_Y - SIGMA_Z)
        want = expm(-1j * (math.pi / 3) * h)
        assert np.max(np.abs(segment_unitary(seg).entries - want)) < 1e-12
        # frozen value of the same matrix
        want = 0.5 * np.array([[1 + 1j, 1 + 1j], [-1 + 1j, 1 - 1j]])
        assert np.max(np.abs(segment_unitary(seg).entries - want)) < 1e-12


class TestCatalog:
    def test_plus_composes_to_plus_identity(self):
        q = trajectory_quaternion(plus_trajectory()).as_array()
        assert np.max(np.abs(q - [1, 0, 0, 0])) < 1e-12
        u = gate_product(plus_trajectory())
        assert np.max(np.abs(u - np.eye(2))) < 1e-10

    def test_minus_composes_to_minus_identity(self):
        q = trajectory_quaternion(minus_trajectory()).as_array()
        assert np.max(np.abs(q - [-1, 0, 0, 0])) < 1e-12
        u = gate_product(minus_trajectory())
        assert np.max(np.abs(u + np.eye(2))) < 1e-10

    def test_catalog_labels(self):
        assert catalog("+").name == "plus"
        assert catalog("plus").name == "plus"
        assert catalog("-").name == "minus"
        assert catalog("−").name == "minus"
        assert catalog("minus").name == "minus"
        with pytest.raises(PhysicsError):
            catalog("x")

    def test_plus_path_touches_but_does_not_cross(self):
        path = sample(plus_trajectory())
        assert lift_sign(path) == 1
        assert count_surface_crossings(path) == 0

    def test_minus_path_crosses_once(self):
        path = sample(minus_trajectory())
        assert lift_sign(path) == -1
        assert count_surface_crossings(path) == 1

    def test_waypoint_progression(self):
        # after three third-turn arcs of the plus path the lift reaches
        # (1/2, (1/2, -1/2, -1/2)); frozen from the Hamilton product
        traj = plus_trajectory()
        partial = Trajectory("partial", traj.segments[:3], closed=False)
        q = trajectory_quaternion(partial).as_array()
        assert np.max(np.abs(q - [0.5, 0.5, -0.5, -0.5])) < 1e-12


class TestClosure:
    def test_open_declared_closed_rejected(self):
        seg = Segment(np.array([0.0, 0.0, 1.0]), 1.0)
        with pytest.raises(ClosureError):
            Trajectory("open", (seg,), closed=True)

    def test_open_trajectory_cannot_be_sampled(self):
        seg = Segment(np.array([0.0, 0.0, 1.0]), 1.0)
        traj = Trajectory("open", (seg,), closed=False)
        with pytest.raises(ClosureError):
            sample(traj)

    def test_composed_angle_of_open_arc(self):
        seg = Segment(np.array([0.0, 1.0, 0.0]), 0.8)
        traj = Trajectory("arc", (seg,), closed=False)
        assert composed_rotation_angle(traj) == pytest.approx(0.8, abs=1e-12)

    def test_reversed_and_concatenated(self):
        traj = minus_trajectory()
        rev = reversed_trajectory(traj)
        both = concatenate(traj, rev)
        q = trajectory_quaternion(both).as_array()
        # path followed by its inverse lifts back to +identity
        assert np.max(np.abs(q - [1, 0, 0, 0])) < 1e-12

    def test_doubled_minus_is_plus_class(self):
        both = concatenate(minus_trajectory(), minus_trajectory())
        path = sample(both)
        assert lift_sign(path) == 1
        assert count_surface_crossings(path) == 2


class TestRandomAndPerturbed:
    def test_random_trajectory_closed(self):
        for seed in range(10):
            traj = random_trajectory(seed, n_waypoints=3)
            assert traj.closed
            assert composed_rotation_angle(traj) < 1e-9

    def test_random_trajectory_reproducible(self):
        a = random_trajectory(7)
        b = random_trajectory(7)
        assert [s.angle for s in a.segments] == [s.angle for s in b.segments]

    def test_perturbed_stays_closed(self):
        for seed in range(10):
            p = perturbed_trajectory(plus_trajectory(), seed)
            assert composed_rotation_angle(p) < 1e-9

    def test_perturbed_actually_moves(self):
        p = perturbed_trajectory(plus_trajectory(), 3)
        base = plus_trajectory()
        moved = max(
            float(np.max(np.abs(np.asarray(a.axis) - np.asarray(b.axis))))
            for a, b in zip(p.segments[:4], base.segments))
        assert moved > 1e-4

    def test_perturbation_bound_validated(self):
        with pytest.raises(PhysicsError):
            perturbed_trajectory(plus_trajectory(), 0, max_delta=0.9)


class TestSerialization:
    def test_round_trip(self, tmp_path):
        traj = minus_trajectory()
        text = save_trajectory(traj)
        back = load_trajectory(text)
        assert back.name == traj.name
        assert back.closed
        for a, b in zip(back.segments, traj.segments):
            assert np.max(np.abs(np.asarray(a.axis) - np.asarray(b.axis))) < 1e-15
            assert a.angle == b.angle

    def test_digits_survive_round_trip(self):
        traj = random_trajectory(11)
        back = load_trajectory(save_trajectory(traj))
        assert trajectory_quaternion(back).w == pytest.approx(
            trajectory_quaternion(traj).w, abs=1e-14)

    def test_schema_rejects_garbage(self):
        with pytest.raises(SchemaError):
            load_trajectory("not json {")

    def test_schema_rejects_wrong_shapes(self):
        good = json.loads(save_trajectory(plus_trajectory()))
        for mangle in (
            lambda d: d.update(name=7),
            lambda d: d.update(closed="yes"),
            lambda d: d.update(segments={}),
            lambda d: d["segments"][0].update(axis=[1.0, 0.0]),
            lambda d: d["segments"][0].update(axis=[1.0, 0.0, True]),
            lambda d: d["segments"][0].update(angle="big"),
            lambda d: d["segments"][0].update(extra=1),
            lambda d: d["segments"][0].update(axis=[0.0, 0.0, 0.0]),
        ):
            doc = json.loads(json.dumps(good))
            mangle(doc)
            with pytest.raises(SchemaError):
                load_trajectory(json.dumps(doc))

    def test_loaded_open_trajectory_flagged(self):
        doc = {"name": "open", "closed": True,
               "segments": [{"axis": [0.0, 0.0, 1.0], "angle": 1.0}]}
        with pytest.raises(ClosureError):
            load_trajectory(json.dumps(doc))

    def test_loader_normalizes_axes(self):
        doc = {"name": "turn", "closed": True,
               "segments": [{"axis": [0.0, 0.0, 2.0],
                             "angle": 2 * math.pi}]}
        traj = load_trajectory(json.dumps(doc))
        assert np.allclose(traj.segments[0].axis, [0, 0, 1], atol=1e-15)
