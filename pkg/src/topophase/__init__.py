"""Topological phase of a maximally entangled spin pair.

Closed paths of local rotations fall into two homotopy classes; the
entangled pair picks up a global sign on the odd class.  The package
classifies closed SO(3) paths three independent ways (SU(2) lift sign,
ball-surface crossing parity, gate-product sign on the entangled state),
runs the circuit-level interferometer, and simulates the three-spin NMR
realization down to hard pulses, delays and Fourier-transformed FIDs.
"""

from .errors import (ClosureError, ContinuityError, FidelityError,
                     NonCyclicError, NyquistError, PhysicsError, SchemaError,
                     TangentialTouchError)
from .policy import DEFAULT, NumericPolicy

__version__ = "0.1.0"

__all__ = [
    "DEFAULT",
    "NumericPolicy",
    "PhysicsError",
    "SchemaError",
    "ClosureError",
    "ContinuityError",
    "TangentialTouchError",
    "NonCyclicError",
    "FidelityError",
    "NyquistError",
    "__version__",
]
