"""Rotation paths in the solid-ball picture of SO(3).

A rotation by angle theta about unit axis n is the ball point theta*n with
theta normalized to [0, pi]; antipodal surface points (|coords| = pi) are
the same rotation.  Closed rotation paths fall into two homotopy classes,
detected equivalently by the sign of the endpoint of a continuous unit
quaternion lift or by the parity of transversal surface crossings.

Quaternions here are (w, v) with Hamilton multiplication; the lift of a
rotation path starts at the identity (1, 0) and stays continuous by small
sampling steps, never by re-signing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ClosureError, ContinuityError, PhysicsError, TangentialTouchError
from .policy import DEFAULT, NumericPolicy
from .quantum import IDENTITY2, SIGMA_X, SIGMA_Y, SIGMA_Z, UnitaryGate

_IDENTITY4 = np.array([1.0, 0.0, 0.0, 0.0])


@dataclass(frozen=True, eq=False)
class UnitQuaternion:
    """Unit quaternion w + v.(i,j,k); norm checked to the algebraic tolerance."""

    w: float
    v: np.ndarray
    policy: NumericPolicy = field(default=DEFAULT, repr=False)

    def __post_init__(self):
        v = np.array(self.v, dtype=float)
        if v.shape != (3,):
            raise PhysicsError(f"vector part has shape {v.shape}, expected (3,)")
        norm = math.hypot(self.w, float(np.linalg.norm(v)))
        if abs(norm - 1.0) > self.policy.algebraic:
            raise PhysicsError(f"quaternion norm {norm!r} deviates from 1")
        v.setflags(write=False)
        object.__setattr__(self, "v", v)

    def as_array(self) -> np.ndarray:
        return np.concatenate(([self.w], self.v))

    def __neg__(self) -> "UnitQuaternion":
        return UnitQuaternion(-self.w, -np.asarray(self.v), policy=self.policy)


def quat_from_axis_angle(axis, angle: float,
                         policy: NumericPolicy = DEFAULT) -> UnitQuaternion:
    """(cos(angle/2), sin(angle/2)*axis) for a unit axis."""
    ax = np.asarray(axis, dtype=float)
    if ax.shape != (3,):
        raise PhysicsError(f"axis shape {ax.shape}, expected (3,)")
    norm = float(np.linalg.norm(ax))
    if abs(norm - 1.0) > policy.geometric:
        raise PhysicsError(f"axis norm {norm!r} deviates from 1")
    ax = ax / norm
    half = 0.5 * angle
    return UnitQuaternion(math.cos(half), math.sin(half) * ax, policy=policy)


def _hamilton(q2: np.ndarray, q1: np.ndarray) -> np.ndarray:
    """Hamilton product q2*q1 on (..., 4) arrays; q1 is the rotation applied first."""
    w2, x2, y2, z2 = (q2[..., i] for i in range(4))
    w1, x1, y1, z1 = (q1[..., i] for i in range(4))
    return np.stack([
        w2 * w1 - x2 * x1 - y2 * y1 - z2 * z1,
        w2 * x1 + x2 * w1 + y2 * z1 - z2 * y1,
        w2 * y1 + y2 * w1 + z2 * x1 - x2 * z1,
        w2 * z1 + z2 * w1 + x2 * y1 - y2 * x1,
    ], axis=-1)


def quat_multiply(q2: UnitQuaternion, q1: UnitQuaternion) -> UnitQuaternion:
    """Composition: the rotation of ``q1`` followed by the rotation of ``q2``."""
    out = _hamilton(q2.as_array(), q1.as_array())
    return UnitQuaternion(float(out[0]), out[1:], policy=q2.policy)


def su2_gate(q: UnitQuaternion) -> UnitaryGate:
    """The SU(2) matrix w*I - i*(v.sigma); a double cover of the rotation of q."""
    v = np.asarray(q.v)
    mat = q.w * IDENTITY2 - 1j * (v[0] * SIGMA_X + v[1] * SIGMA_Y + v[2] * SIGMA_Z)
    return UnitaryGate(mat, policy=q.policy)


@dataclass(frozen=True, eq=False)
class BallPoint:
    """Rotation as a point of the closed ball of radius pi.

    The representative comes straight from the lift: surface points keep the
    axis sign they were computed with, and equality identifies antipodes.
    """

    coords: np.ndarray
    policy: NumericPolicy = field(default=DEFAULT, repr=False)

    def __post_init__(self):
        c = np.array(self.coords, dtype=float)
        if c.shape != (3,):
            raise PhysicsError(f"coords shape {c.shape}, expected (3,)")
        if np.linalg.norm(c) > math.pi + self.policy.geometric:
            raise PhysicsError("point lies outside the radius-pi ball")
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)

    @property
    def angle(self) -> float:
        return float(np.linalg.norm(self.coords))

    @property
    def axis(self) -> np.ndarray:
        a = self.angle
        if a == 0.0:
            raise PhysicsError("identity rotation has no axis")
        return np.asarray(self.coords) / a

    def same_rotation(self, other: "BallPoint", tol: float | None = None) -> bool:
        tol = self.policy.geometric if tol is None else tol
        c, d = np.asarray(self.coords), np.asarray(other.coords)
        if np.linalg.norm(c - d) <= tol:
            return True
        # antipodal identification applies only on the surface
        on_surface = abs(self.angle - math.pi) <= tol and abs(other.angle - math.pi) <= tol
        return on_surface and bool(np.linalg.norm(c + d) <= tol)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BallPoint):
            return NotImplemented
        return self.same_rotation(other)


def ball_point(q: UnitQuaternion) -> BallPoint:
    """Ball-model point of the rotation of q; q and -q map to the same rotation."""
    w, v = q.w, np.asarray(q.v)
    if w < 0.0:
        w, v = -w, -v
    vnorm = float(np.linalg.norm(v))
    angle = 2.0 * math.atan2(vnorm, w)
    if vnorm == 0.0:
        return BallPoint(np.zeros(3), policy=q.policy)
    return BallPoint((angle / vnorm) * v, policy=q.policy)


@dataclass(frozen=True, eq=False)
class SampledPath:
    """Discretized continuous lift: (N, 4) quaternion samples, identity first.

    Consecutive samples must satisfy dot > 0; that is what makes the lift
    sign well defined without ever re-signing samples.
    """

    points: np.ndarray
    step: float
    policy: NumericPolicy = field(default=DEFAULT, repr=False)

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 4 or pts.shape[0] < 1:
            raise PhysicsError(f"points shape {pts.shape}, expected (N, 4)")
        if not (0.0 < self.step <= 0.01):
            raise PhysicsError(f"sampling step {self.step!r} outside (0, 0.01]")
        if np.linalg.norm(pts[0] - _IDENTITY4) > self.policy.algebraic:
            raise PhysicsError("lift must start at the identity quaternion")
        norms = np.linalg.norm(pts, axis=1)
        if np.max(np.abs(norms - 1.0)) > 1e-9:
            raise PhysicsError("samples drifted off the unit sphere")
        dots = np.sum(pts[1:] * pts[:-1], axis=1)
        if dots.size and float(np.min(dots)) <= 0.0:
            raise ContinuityError("consecutive lift samples are not close")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return self.points.shape[0]

    def point(self, i: int) -> UnitQuaternion:
        p = self.points[i]
        return UnitQuaternion(float(p[0]), p[1:], policy=self.policy)


def sample_arcs(segments, step: float, policy: NumericPolicy = DEFAULT) -> SampledPath:
    """Lift of a concatenation of constant-axis arcs, sampled at ``step`` radians.

    ``segments`` is a sequence of (axis, angle) pairs.  Each segment is cut
    into ceil(|angle|/step) equal sub-arcs; segment endpoints are always
    sample points, and the accumulated quaternion at each boundary is the
    exact Hamilton product of the segment quaternions so far.
    """
    if not (0.0 < step <= 0.01):
        raise PhysicsError(f"sampling step {step!r} outside (0, 0.01]")
    base = _IDENTITY4.copy()
    chunks = [base[None, :]]
    for axis, angle in segments:
        ax = np.asarray(axis, dtype=float)
        norm = float(np.linalg.norm(ax))
        if ax.shape != (3,) or abs(norm - 1.0) > policy.geometric:
            raise PhysicsError(f"segment axis {ax!r} is not a unit vector")
        ax = ax / norm
        m = max(1, math.ceil(abs(angle) / step))
        half = 0.5 * angle * (np.arange(1, m + 1) / m)
        seg = np.empty((m, 4))
        seg[:, 0] = np.cos(half)
        seg[:, 1:] = np.sin(half)[:, None] * ax[None, :]
        chunks.append(_hamilton(seg, base[None, :]))
        base = chunks[-1][-1]
    return SampledPath(np.concatenate(chunks, axis=0), step, policy=policy)


def _require_closed(path: SampledPath, policy: NumericPolicy) -> float:
    """Distance of the endpoint to +-identity; raises if the path is open."""
    end = np.asarray(path.points[-1])
    dist = min(float(np.linalg.norm(end - _IDENTITY4)),
               float(np.linalg.norm(end + _IDENTITY4)))
    if dist > policy.closure:
        raise ClosureError(f"path endpoint is {dist:.3e} from the identity rotation")
    return dist


def lift_sign(path: SampledPath, policy: NumericPolicy = DEFAULT) -> int:
    """+1 if the continuous lift returns to +identity, -1 for -identity."""
    _require_closed(path, policy)
    w_end = float(path.points[-1, 0])
    return 1 if w_end > 0.0 else -1


def count_surface_crossings(path: SampledPath,
                            policy: NumericPolicy = DEFAULT) -> int:
    """Number of transversal surface passages of a closed rotation path.

    The surface of the ball is w = 0 in the lift.  Isolated samples with
    |w| below the surface-zero threshold are bridged by the nearest valid
    neighbors on both sides: equal signs mean a tangential touch (no
    crossing), opposite signs one crossing.  Two or more consecutive
    near-zero samples mean the path slides along the surface for a finite
    arc, where the crossing count has no continuous definition.
    """
    _require_closed(path, policy)
    ws = np.asarray(path.points[:, 0])
    near = np.abs(ws) < policy.surface_zero
    if near.size > 1 and bool(np.any(near[1:] & near[:-1])):
        raise TangentialTouchError("path slides along the ball surface")
    signs = np.sign(ws[~near])
    if signs.size == 0:
        raise TangentialTouchError("path lies entirely on the ball surface")
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


def random_closed_segments(rng: np.random.Generator, n_waypoints: int,
                           policy: NumericPolicy = DEFAULT) -> list:
    """Random constant-axis arcs composing to the identity rotation.

    Draws ``n_waypoints`` arcs with isotropic axes and angles uniform on
    (0, 2*pi), then closes with the single shortest arc back to the
    identity coset.  Returns a list of (axis, angle) pairs.
    """
    if n_waypoints < 1:
        raise PhysicsError("need at least one waypoint")
    segments = []
    acc = _IDENTITY4.copy()
    for _ in range(n_waypoints):
        vec = rng.normal(size=3)
        while np.linalg.norm(vec) < 1e-12:
            vec = rng.normal(size=3)
        axis = vec / np.linalg.norm(vec)
        angle = float(rng.uniform(0.0, 2.0 * math.pi))
        segments.append((axis, angle))
        q = quat_from_axis_angle(axis, angle, policy=policy)
        acc = _hamilton(q.as_array(), acc)
    closing = ball_point(UnitQuaternion(float(acc[0]), acc[1:], policy=policy))
    if closing.angle > policy.algebraic:
        segments.append((np.asarray(closing.axis), -closing.angle))
    return segments


def random_closed_path(seed: int, n_waypoints: int, step: float,
                       policy: NumericPolicy = DEFAULT) -> SampledPath:
    """Sampled lift of a reproducible random closed rotation path."""
    rng = np.random.default_rng(seed)
    return sample_arcs(random_closed_segments(rng, n_waypoints, policy=policy),
                       step, policy=policy)
