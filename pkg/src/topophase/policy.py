"""Central numeric policy.

All tolerance decisions in the package route through one policy record so
that algebraic checks (unitarity, norms, hermiticity), geometric checks
(unit axes, path closure) and detection thresholds stay mutually
consistent.  Functions accept an optional policy argument and fall back to
``DEFAULT``.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class NumericPolicy:
    """Tolerance bundle used across the package.

    algebraic      -- exact-identity checks: unitarity, norm, hermiticity.
    geometric      -- unit-axis and rotation-closure checks.
    closure        -- loose closure bound for numerically sampled paths.
    surface_zero   -- |w| below this counts as lying on the ball surface.
    expectation    -- tolerated imaginary leakage in real expectation values.
    state_match    -- state/operator comparison in physics-level assertions.
    """

    algebraic: float = 1e-12
    geometric: float = 1e-9
    closure: float = 1e-6
    surface_zero: float = 1e-12
    expectation: float = 1e-10
    state_match: float = 1e-10


DEFAULT = NumericPolicy()
