"""Maximally entangled two-qubit states and the topological phase.

The MES family sqrt(1/2)*(a|00> + b|01> - b*|10> + a*|11>) is closed under
local action u (x) I on the first qubit; a closed SO(3) loop of such
actions returns the state to +-itself, the sign depending only on the
loop's homotopy class.  The phase is extracted from the exact complex
overlap, never from operator bookkeeping, so gate-level global phases
cannot leak in.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NonCyclicError, PhysicsError
from .policy import DEFAULT, NumericPolicy
from .quantum import DensityOperator, QuantumState, UnitaryGate, apply_gate, \
    overlap, partial_trace
from .trajectories import Trajectory, segment_unitary


@dataclass(frozen=True)
class MESCoefficients:
    alpha: complex
    beta: complex
    policy: NumericPolicy = field(default=DEFAULT, repr=False)

    def __post_init__(self):
        norm = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(norm - 1.0) > self.policy.algebraic:
            raise PhysicsError(f"|alpha|^2+|beta|^2 = {norm!r} deviates from 1")


def mes_state(c: MESCoefficients) -> QuantumState:
    """sqrt(1/2)*(a|00> + b|01> - conj(b)|10> + conj(a)|11>)."""
    a, b = complex(c.alpha), complex(c.beta)
    amps = math.sqrt(0.5) * np.array(
        [a, b, -b.conjugate(), a.conjugate()], dtype=complex)
    return QuantumState(2, amps, policy=c.policy)


def bell_state(policy: NumericPolicy = DEFAULT) -> QuantumState:
    return mes_state(MESCoefficients(1.0, 0.0, policy=policy))


def mes_coefficients(state: QuantumState) -> MESCoefficients:
    """Invert mes_state; raises if the state is not of the MES form."""
    if state.n_qubits != 2:
        raise PhysicsError("MES form is defined for two qubits")
    amps = np.asarray(state.amplitudes)
    a = complex(amps[0]) * math.sqrt(2.0)
    b = complex(amps[1]) * math.sqrt(2.0)
    c = MESCoefficients(a, b, policy=state.policy)
    if np.max(np.abs(np.asarray(mes_state(c).amplitudes) - amps)) \
            > state.policy.state_match:
        raise PhysicsError("state is not of the MES form")
    return c


def apply_local(state: QuantumState, u: UnitaryGate) -> QuantumState:
    """(u (x) I)|state>: the local action driving the trajectory."""
    if state.n_qubits != 2 or u.entries.shape != (2, 2):
        raise PhysicsError("apply_local wants a 2-qubit state and a 1-qubit gate")
    return apply_gate(state, u, (0,))


def is_mes(state: QuantumState, policy: NumericPolicy = DEFAULT) -> bool:
    """True iff both single-qubit reduced operators equal I/2."""
    if state.n_qubits != 2:
        raise PhysicsError("is_mes is defined for two qubits")
    rho = DensityOperator.from_state(state)
    half = 0.5 * np.eye(2)
    for keep in ((0,), (1,)):
        red = partial_trace(rho, keep).entries
        if float(np.max(np.abs(red - half))) > policy.state_match:
            return False
    return True


def trajectory_phase(traj: Trajectory, policy: NumericPolicy = DEFAULT) -> int:
    """+-1 factor the Bell state acquires around a closed trajectory.

    Closure of the trajectory is re-checked through the sampled-lift
    machinery only implicitly: a non-closed gate product fails the
    |overlap| = 1 cyclicity requirement below.
    """
    if not traj.closed:
        raise NonCyclicError(f"trajectory {traj.name!r} is not marked closed")
    start = bell_state(policy=policy)
    state = start
    for seg in traj.segments:
        state = apply_local(state, segment_unitary(seg))
    ov = overlap(start, state)
    if abs(abs(ov) - 1.0) > policy.geometric:
        raise NonCyclicError(
            f"evolution is not cyclic: |overlap| = {abs(ov)!r}")
    if abs(ov.imag) > policy.geometric:
        raise NonCyclicError(
            f"overlap phase {cmath.phase(ov)!r} is not 0 or pi")
    return 1 if ov.real > 0.0 else -1


def class_label(traj: Trajectory, policy: NumericPolicy = DEFAULT) -> str:
    return "+" if trajectory_phase(traj, policy=policy) > 0 else "-"
