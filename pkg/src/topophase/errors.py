"""Error taxonomy.

PhysicsError covers every condition where inputs are well-formed but the
physics refuses them (open paths, non-cyclic evolutions, ambiguous surface
contact, broken compilations).  SchemaError covers malformed serialized
inputs.  The CLI maps PhysicsError to exit code 1, usage problems to 2 and
I/O failures to 3.
"""


class PhysicsError(ValueError):
    """Inputs are structurally valid but physically inadmissible."""


class ClosureError(PhysicsError):
    """A path or trajectory declared closed does not return to its start."""


class ContinuityError(PhysicsError):
    """Consecutive lift samples jump too far to define a continuous lift."""


class TangentialTouchError(PhysicsError):
    """The path lingers on the ball surface; crossing parity is undefined."""


class NonCyclicError(PhysicsError):
    """Final state is not the initial state up to a sign; no phase defined."""


class FidelityError(PhysicsError):
    """A compiled pulse sequence misses its intended propagator."""


class NyquistError(PhysicsError):
    """Requested acquisition window cannot represent the signal band."""


class SchemaError(ValueError):
    """Serialized input violates the documented file schema."""
