"""Multi-qubit states, gates and density operators.

Conventions, fixed package-wide:

* Qubit 0 is the leftmost tensor factor.  Basis states are ordered
  big-endian, so for three qubits the amplitude index of |b0 b1 b2> is
  4*b0 + 2*b1 + b2.
* Rotations follow exp(-i*angle/2 * n.sigma): positive angle about +z maps
  |0> to exp(-i*angle/2)|0>.
* |0> carries spin projection +1/2 along z.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import PhysicsError
from .policy import DEFAULT, NumericPolicy

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
IDENTITY2 = np.eye(2, dtype=complex)

PAULI = {"x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z}


def _readonly(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=complex)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class QuantumState:
    """Pure state of ``n_qubits`` qubits; amplitudes normalized to 1."""

    n_qubits: int
    amplitudes: np.ndarray
    policy: NumericPolicy = field(default=DEFAULT, repr=False)

    def __post_init__(self):
        amps = _readonly(self.amplitudes)
        if self.n_qubits < 1:
            raise PhysicsError("need at least one qubit")
        if amps.shape != (2**self.n_qubits,):
            raise PhysicsError(
                f"amplitude vector has shape {amps.shape}, "
                f"expected ({2**self.n_qubits},)"
            )
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > self.policy.algebraic:
            raise PhysicsError(f"state norm {norm!r} deviates from 1")
        object.__setattr__(self, "amplitudes", amps)


def basis_state(bits: str) -> QuantumState:
    """Computational basis state from a bit string, e.g. ``"010"``."""
    if not bits or set(bits) - {"0", "1"}:
        raise PhysicsError(f"not a bit string: {bits!r}")
    n = len(bits)
    amps = np.zeros(2**n, dtype=complex)
    amps[int(bits, 2)] = 1.0
    return QuantumState(n, amps)


@dataclass(frozen=True, eq=False)
class UnitaryGate:
    """Unitary on k qubits; entries form a 2^k x 2^k matrix."""

    entries: np.ndarray
    policy: NumericPolicy = field(default=DEFAULT, repr=False)

    def __post_init__(self):
        mat = _readonly(self.entries)
        d = mat.shape[0]
        if mat.ndim != 2 or mat.shape != (d, d) or d < 2 or d & (d - 1):
            raise PhysicsError(f"gate shape {mat.shape} is not square 2^k")
        dev = float(np.max(np.abs(mat.conj().T @ mat - np.eye(d))))
        if dev > self.policy.algebraic:
            raise PhysicsError(f"matrix is not unitary (deviation {dev:.3e})")
        object.__setattr__(self, "entries", mat)

    @property
    def n_qubits(self) -> int:
        return self.entries.shape[0].bit_length() - 1


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Hermitian operator on ``n_spins`` spins with a declared trace.

    The declared trace is checked, not assumed; deviation parts of NMR
    density operators legitimately carry trace 0.
    """

    n_spins: int
    entries: np.ndarray
    trace: float = 1.0
    policy: NumericPolicy = field(default=DEFAULT, repr=False)

    def __post_init__(self):
        mat = _readonly(self.entries)
        d = 2**self.n_spins
        if mat.shape != (d, d):
            raise PhysicsError(f"operator shape {mat.shape}, expected ({d}, {d})")
        herm = float(np.max(np.abs(mat - mat.conj().T)))
        if herm > self.policy.algebraic:
            raise PhysicsError(f"operator is not hermitian (deviation {herm:.3e})")
        tr = complex(np.trace(mat))
        if abs(tr - self.trace) > self.policy.algebraic:
            raise PhysicsError(f"trace {tr!r} deviates from declared {self.trace!r}")
        object.__setattr__(self, "entries", mat)

    @classmethod
    def from_state(cls, state: QuantumState) -> "DensityOperator":
        rho = np.outer(state.amplitudes, state.amplitudes.conj())
        return cls(state.n_qubits, rho, trace=1.0, policy=state.policy)


def rotation_gate(axis, angle: float, policy: NumericPolicy = DEFAULT) -> UnitaryGate:
    """exp(-i*angle/2 * axis.sigma) for a unit 3-vector axis."""
    ax = np.asarray(axis, dtype=float)
    if ax.shape != (3,):
        raise PhysicsError(f"axis shape {ax.shape}, expected (3,)")
    norm = float(np.linalg.norm(ax))
    if abs(norm - 1.0) > policy.geometric:
        raise PhysicsError(f"rotation axis norm {norm!r} deviates from 1")
    ax = ax / norm
    half = 0.5 * angle
    ndots = ax[0] * SIGMA_X + ax[1] * SIGMA_Y + ax[2] * SIGMA_Z
    mat = np.cos(half) * IDENTITY2 - 1j * np.sin(half) * ndots
    return UnitaryGate(mat, policy=policy)


def controlled_gate(u: UnitaryGate) -> UnitaryGate:
    """Two-qubit gate applying ``u`` to the target iff the control is |1>.

    Control is the first of the two qubits the result acts on.
    """
    if u.entries.shape != (2, 2):
        raise PhysicsError("controlled_gate expects a single-qubit gate")
    mat = np.eye(4, dtype=complex)
    mat[2:, 2:] = u.entries
    return UnitaryGate(mat, policy=u.policy)


def _check_targets(targets, k: int, n: int) -> tuple:
    tg = tuple(int(t) for t in targets)
    if len(tg) != k:
        raise PhysicsError(f"gate acts on {k} qubits, got targets {tg}")
    if len(set(tg)) != len(tg) or any(t < 0 or t >= n for t in tg):
        raise PhysicsError(f"targets {tg} invalid for {n} qubits")
    return tg


def _apply_matrix(vec: np.ndarray, mat: np.ndarray, targets: tuple, n: int) -> np.ndarray:
    k = len(targets)
    tensor = vec.reshape((2,) * n)
    tensor = np.moveaxis(tensor, targets, range(k))
    tensor = (mat @ tensor.reshape(2**k, -1)).reshape((2,) * n)
    tensor = np.moveaxis(tensor, range(k), targets)
    return tensor.reshape(-1)


def apply_gate(state: QuantumState, gate: UnitaryGate, targets) -> QuantumState:
    """Apply ``gate`` to the listed qubits (order matters for multi-qubit gates)."""
    tg = _check_targets(targets, gate.n_qubits, state.n_qubits)
    amps = _apply_matrix(np.asarray(state.amplitudes), gate.entries, tg, state.n_qubits)
    return QuantumState(state.n_qubits, amps, policy=state.policy)


def embed_operator(op: np.ndarray, targets, n_qubits: int) -> np.ndarray:
    """Embed a k-qubit operator into the full 2^n space with identity elsewhere."""
    op = np.asarray(op, dtype=complex)
    k = op.shape[0].bit_length() - 1
    tg = _check_targets(targets, k, n_qubits)
    dim = 2**n_qubits
    full = np.empty((dim, dim), dtype=complex)
    eye = np.eye(dim, dtype=complex)
    for j in range(dim):
        full[:, j] = _apply_matrix(eye[:, j], op, tg, n_qubits)
    return full


def overlap(a: QuantumState, b: QuantumState) -> complex:
    """<a|b>; first argument is conjugated."""
    if a.n_qubits != b.n_qubits:
        raise PhysicsError("states live on different qubit counts")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def expectation(rho: DensityOperator, observable: np.ndarray,
                policy: NumericPolicy = DEFAULT) -> float:
    """Tr(rho * observable) for a hermitian observable; returns the real value."""
    obs = np.asarray(observable, dtype=complex)
    if obs.shape != rho.entries.shape:
        raise PhysicsError(f"observable shape {obs.shape} does not match operator")
    herm = float(np.max(np.abs(obs - obs.conj().T)))
    if herm > policy.expectation:
        raise PhysicsError(f"observable is not hermitian (deviation {herm:.3e})")
    val = complex(np.trace(rho.entries @ obs))
    if abs(val.imag) > policy.expectation:
        raise PhysicsError(f"expectation has imaginary leakage {val.imag:.3e}")
    return float(val.real)


def partial_trace(rho: DensityOperator, keep) -> DensityOperator:
    """Trace out all spins except ``keep`` (kept in ascending original order)."""
    kp = sorted({int(q) for q in keep})
    n = rho.n_spins
    if not kp or any(q < 0 or q >= n for q in kp):
        raise PhysicsError(f"keep set {kp} invalid for {n} spins")
    drop = [q for q in range(n) if q not in kp]
    tensor = rho.entries.reshape((2,) * (2 * n))
    for q in reversed(drop):
        tensor = np.trace(tensor, axis1=q, axis2=q + (tensor.ndim // 2))
    d = 2 ** len(kp)
    return DensityOperator(len(kp), tensor.reshape(d, d), trace=rho.trace,
                           policy=rho.policy)
