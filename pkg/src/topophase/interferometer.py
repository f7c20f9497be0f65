"""Circuit-level ancilla interferometer.

Three qubits: qubit 0 is the ancilla (interferometer arms = its basis
states), qubits 1 and 2 carry the Bell pair.  Trajectory segments act as
controlled rotations on qubit 1 so only the |1>-arm copy of the MES is
transported; the ancilla phase gate exp(-i*phi*Iz) then writes out the
interference pattern <sigma_x(ancilla)> = cos(phi - gamma), gamma = 0 or
pi by homotopy class.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ClosureError, PhysicsError
from .policy import DEFAULT, NumericPolicy
from .quantum import (SIGMA_X, DensityOperator, QuantumState, UnitaryGate,
                      apply_gate, basis_state, controlled_gate, embed_operator,
                      expectation, rotation_gate)
from .trajectories import Trajectory, segment_unitary

PSEUDO_HADAMARD = rotation_gate((0.0, 1.0, 0.0), math.pi / 2)
CNOT = controlled_gate(UnitaryGate(SIGMA_X))


@dataclass(frozen=True, eq=False)
class InterferometerRun:
    """One evaluated interferometer point."""

    trajectory: Trajectory
    phi: float
    result: float
    policy: NumericPolicy = field(default=DEFAULT, repr=False)

    def __post_init__(self):
        if abs(self.result) > 1.0 + self.policy.algebraic:
            raise PhysicsError(f"expectation {self.result!r} outside [-1, 1]")


def build_initial() -> QuantumState:
    """|000> -> pseudo-H(1) -> CNOT(1,2) -> pseudo-H(0): equal superposition
    of the Bell pair tagged by the ancilla arms."""
    state = basis_state("000")
    state = apply_gate(state, PSEUDO_HADAMARD, (1,))
    state = apply_gate(state, CNOT, (1, 2))
    state = apply_gate(state, PSEUDO_HADAMARD, (0,))
    return state


def run(traj: Trajectory, phi: float, policy: NumericPolicy = DEFAULT) -> float:
    """<sigma_x> on the ancilla after the controlled trajectory and phase gate."""
    if not traj.closed:
        raise ClosureError(f"trajectory {traj.name!r} is not marked closed")
    state = build_initial()
    for seg in traj.segments:
        state = apply_gate(state, controlled_gate(segment_unitary(seg)), (0, 1))
    state = apply_gate(state, rotation_gate((0.0, 0.0, 1.0), phi), (0,))
    sx = embed_operator(SIGMA_X, (0,), 3)
    return expectation(DensityOperator.from_state(state), sx, policy=policy)


def interferogram(traj: Trajectory, phis, policy: NumericPolicy = DEFAULT) -> list:
    """Pointwise run results as (phi, value) rows."""
    phis = [float(p) for p in phis]
    if not phis:
        raise PhysicsError("need at least one phase value")
    rows = []
    for phi in phis:
        point = InterferometerRun(traj, phi, run(traj, phi, policy=policy),
                                  policy=policy)
        rows.append((point.phi, point.result))
    return rows


def phi_grid(n_steps: int) -> np.ndarray:
    """n_steps phases evenly spaced over [0, 2*pi)."""
    if n_steps < 2:
        raise PhysicsError("need at least two phase steps")
    return np.linspace(0.0, 2.0 * math.pi, n_steps, endpoint=False)


def write_interferogram_csv(rows, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("phi,expectation\n")
        for phi, value in rows:
            fh.write(f"{phi:.15g},{value:.15g}\n")
