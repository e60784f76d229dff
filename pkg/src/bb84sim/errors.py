"""Exception types shared across the simulation library.

The CLI maps these onto exit codes: usage problems exit 2, a violated
physical invariant (e.g. an inner detector click) exits 3.
"""


class InvalidStateError(ValueError):
    """A polarization state failed validation (non-finite or norm too far from 1)."""


class ZeroNormError(ValueError):
    """A state with (near-)zero norm cannot be renormalized."""


class InvalidSigmaError(ValueError):
    """Pointer width must be a positive finite number."""


class InvalidCountError(ValueError):
    """A count parameter (quadrature points, steps, ...) is out of range."""


class InvalidConfigError(ValueError):
    """A session configuration is malformed."""


class InvariantViolationError(RuntimeError):
    """An internal physical invariant was violated during simulation.

    Raised, for example, if a cascade run ever samples one of the inner
    detectors, which carry zero probability for every input state.
    """
