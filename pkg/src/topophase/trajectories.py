"""Benchmark trajectories, arbitrary segment trajectories, serialization.

A trajectory is an ordered list of fixed-axis rotation segments.  The two
benchmark paths traverse edges of the cube inscribed in the SO(3) ball:
four arcs of 2*pi/3 about cube diagonals, composing to the identity
rotation.  Their SU(2) lifts differ by a sign, which is the whole point.

JSON schema: {"name": str, "closed": bool, "segments": [{"axis": [x,y,z],
"angle": radians}, ...]}.  Axes are renormalized on load; numbers are
serialized with full round-trip precision.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ClosureError, PhysicsError, SchemaError
from .policy import DEFAULT, NumericPolicy
from . import so3
from .quantum import UnitaryGate, rotation_gate

_THIRD = 2.0 * math.pi / 3.0
_DIAG = 1.0 / math.sqrt(3.0)


@dataclass(frozen=True, eq=False)
class Segment:
    """One constant-axis rotation arc; angle is signed, axis is unit."""

    axis: np.ndarray
    angle: float
    policy: NumericPolicy = field(default=DEFAULT, repr=False)

    def __post_init__(self):
        ax = np.array(self.axis, dtype=float)
        if ax.shape != (3,):
            raise PhysicsError(f"axis shape {ax.shape}, expected (3,)")
        norm = float(np.linalg.norm(ax))
        if abs(norm - 1.0) > self.policy.geometric:
            raise PhysicsError(f"segment axis norm {norm!r} deviates from 1")
        if not math.isfinite(self.angle) or abs(self.angle) > 2.0 * math.pi + 1e-12:
            raise PhysicsError(f"segment angle {self.angle!r} outside [-2*pi, 2*pi]")
        ax = ax / norm
        ax.setflags(write=False)
        object.__setattr__(self, "axis", ax)

    def quaternion(self) -> so3.UnitQuaternion:
        return so3.quat_from_axis_angle(self.axis, self.angle, policy=self.policy)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Named sequence of segments; closure is validated when declared."""

    name: str
    segments: tuple
    closed: bool = True
    policy: NumericPolicy = field(default=DEFAULT, repr=False)

    def __post_init__(self):
        segs = tuple(self.segments)
        if not all(isinstance(s, Segment) for s in segs):
            raise PhysicsError("segments must be Segment values")
        object.__setattr__(self, "segments", segs)
        if self.closed:
            residual = composed_rotation_angle(self)
            if residual > self.policy.geometric:
                raise ClosureError(
                    f"trajectory {self.name!r} declared closed but composes to a "
                    f"rotation by {residual:.3e} rad")


def trajectory_quaternion(traj: Trajectory) -> so3.UnitQuaternion:
    """SU(2) product of all segment lifts, first segment applied first."""
    q = so3.UnitQuaternion(1.0, np.zeros(3), policy=traj.policy)
    for seg in traj.segments:
        q = so3.quat_multiply(seg.quaternion(), q)
    return q


def composed_rotation_angle(traj: Trajectory) -> float:
    """Rotation angle of the composed trajectory; 0 means closed in SO(3)."""
    return so3.ball_point(trajectory_quaternion(traj)).angle


def plus_trajectory() -> Trajectory:
    axes = [(-1, -1, -1), (1, -1, -1), (-1, -1, 1), (-1, 1, 1)]
    return Trajectory("plus", tuple(
        Segment(np.array(a, float) * _DIAG, _THIRD) for a in axes))


def minus_trajectory() -> Trajectory:
    axes = [(-1, -1, -1), (1, -1, -1), (1, -1, -1), (1, 1, -1)]
    return Trajectory("minus", tuple(
        Segment(np.array(a, float) * _DIAG, _THIRD) for a in axes))


def catalog(class_label: str) -> Trajectory:
    """Benchmark trajectory by its class label '+' or '-'."""
    if class_label in ("+", "plus"):
        return plus_trajectory()
    if class_label in ("-", "−", "minus"):
        return minus_trajectory()
    raise PhysicsError(f"unknown trajectory class {class_label!r}")


def sample(traj: Trajectory, step: float = 0.005) -> so3.SampledPath:
    """Sampled continuous lift; requires a closed trajectory."""
    if not traj.closed:
        raise ClosureError(f"trajectory {traj.name!r} is not marked closed")
    return so3.sample_arcs([(s.axis, s.angle) for s in traj.segments], step,
                           policy=traj.policy)


def segment_unitary(seg: Segment) -> UnitaryGate:
    return rotation_gate(seg.axis, seg.angle, policy=seg.policy)


def reversed_trajectory(traj: Trajectory) -> Trajectory:
    """Inverse path: segments reversed with negated angles; same class."""
    segs = tuple(Segment(s.axis, -s.angle, policy=s.policy)
                 for s in reversed(traj.segments))
    return Trajectory(traj.name + "-reversed", segs, closed=traj.closed,
                      policy=traj.policy)


def concatenate(a: Trajectory, b: Trajectory, name: str | None = None) -> Trajectory:
    return Trajectory(name or f"{a.name}+{b.name}", a.segments + b.segments,
                      closed=a.closed and b.closed, policy=a.policy)


def random_trajectory(seed: int, n_waypoints: int = 4,
                      policy: NumericPolicy = DEFAULT) -> Trajectory:
    """Reproducible random closed trajectory (waypoint arcs + closing arc)."""
    rng = np.random.default_rng(seed)
    segs = so3.random_closed_segments(rng, n_waypoints, policy=policy)
    return Trajectory(f"random-{seed}", tuple(
        Segment(ax, ang, policy=policy) for ax, ang in segs), policy=policy)


def perturbed_trajectory(traj: Trajectory, seed: int,
                         max_delta: float = 0.05) -> Trajectory:
    """Jitter every segment axis and angle by at most ``max_delta`` rad, re-close.

    The closing arc is the single shortest geodesic back to the identity
    rotation; for small jitters it is far shorter than pi, so re-closing
    cannot itself cross the surface and the homotopy class is preserved.
    """
    if not 0.0 < max_delta < 0.5:
        raise PhysicsError(f"perturbation bound {max_delta!r} outside (0, 0.5)")
    rng = np.random.default_rng(seed)
    segs = []
    for seg in traj.segments:
        tilt = rng.normal(size=3)
        tilt -= np.dot(tilt, seg.axis) * np.asarray(seg.axis)
        tnorm = float(np.linalg.norm(tilt))
        axis = np.asarray(seg.axis, float).copy()
        if tnorm > 1e-12:
            delta = float(rng.uniform(0.0, max_delta))
            axis = math.cos(delta) * axis + math.sin(delta) * tilt / tnorm
        angle = seg.angle + float(rng.uniform(-max_delta, max_delta))
        angle = float(np.clip(angle, -2.0 * math.pi, 2.0 * math.pi))
        segs.append(Segment(axis / np.linalg.norm(axis), angle, policy=traj.policy))
    acc = so3.UnitQuaternion(1.0, np.zeros(3), policy=traj.policy)
    for seg in segs:
        acc = so3.quat_multiply(seg.quaternion(), acc)
    closing = so3.ball_point(acc)
    if closing.angle > traj.policy.algebraic:
        segs.append(Segment(closing.axis, -closing.angle, policy=traj.policy))
    return Trajectory(f"{traj.name}-perturbed-{seed}", tuple(segs),
                      policy=traj.policy)


def save_trajectory(traj: Trajectory) -> str:
    doc = {
        "name": traj.name,
        "closed": traj.closed,
        "segments": [
            {"axis": [float(c) for c in seg.axis], "angle": float(seg.angle)}
            for seg in traj.segments
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def load_trajectory(document: str) -> Trajectory:
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaError("top-level value must be an object")
    name = doc.get("name")
    closed = doc.get("closed")
    segments = doc.get("segments")
    if not isinstance(name, str):
        raise SchemaError('"name" must be a string')
    if not isinstance(closed, bool):
        raise SchemaError('"closed" must be true or false')
    if not isinstance(segments, list):
        raise SchemaError('"segments" must be a list')
    segs = []
    for i, raw in enumerate(segments):
        if not isinstance(raw, dict) or set(raw) - {"axis", "angle"}:
            raise SchemaError(f"segment {i} must be an object with axis and angle")
        axis = raw.get("axis")
        angle = raw.get("angle")
        if (not isinstance(axis, list) or len(axis) != 3
                or not all(isinstance(c, (int, float)) and not isinstance(c, bool)
                           for c in axis)):
            raise SchemaError(f'segment {i}: "axis" must be a list of 3 numbers')
        if not isinstance(angle, (int, float)) or isinstance(angle, bool):
            raise SchemaError(f'segment {i}: "angle" must be a number')
        vec = np.array(axis, dtype=float)
        norm = float(np.linalg.norm(vec))
        if norm < 1e-12:
            raise SchemaError(f"segment {i}: axis is not normalizable")
        segs.append(Segment(vec / norm, float(angle)))
    return Trajectory(name, tuple(segs), closed=closed)
