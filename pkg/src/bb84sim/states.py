"""Single-photon polarization states and projective measurement.

Amplitudes are stored as double-precision complex numbers and every
formula is evaluated in closed form; there is no grid discretization
anywhere in the library.  All types are immutable values and all
operations are pure functions, so they are safe to share across threads.

Stochastic operations never own a random number generator: they take an
explicit uniform deviate in [0, 1), which makes every run replayable.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

from .errors import InvalidStateError, ZeroNormError

#: Constructors and transforming operations keep the norm within this bound.
NORM_ATOL_CONSTRUCT = 1e-12
#: Consumers tolerate this much norm drift from chained float operations.
NORM_ATOL_CONSUME = 1e-9
#: Squared amplitudes below this are treated as exact zeros (underflow guard).
ZERO_NORM_SQ = 1e-300

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


class Bb84Symbol(Enum):
    """The four polarization symbols used by the protocol."""

    H = "H"
    V = "V"
    D = "D"
    A = "A"


class Basis(Enum):
    """The two conjugate encoding bases."""

    RECTILINEAR = "rectilinear"
    DIAGONAL = "diagonal"


#: Symbols of each basis in measurement order (first-listed symbol first).
BASIS_SYMBOLS: dict[Basis, tuple[Bb84Symbol, Bb84Symbol]] = {
    Basis.RECTILINEAR: (Bb84Symbol.H, Bb84Symbol.V),
    Basis.DIAGONAL: (Bb84Symbol.D, Bb84Symbol.A),
}


@dataclass(frozen=True, slots=True)
class PolarizationState:
    """Complex amplitude pair over the horizontal/vertical basis.

    ``alpha`` is the amplitude on H, ``beta`` the amplitude on V.  The
    constructor rejects non-finite amplitudes; unit norm is guaranteed by
    the operations that produce states, not by the type itself (so that
    :func:`renormalize` can accept unnormalized input).
    """

    alpha: complex
    beta: complex

    def __post_init__(self) -> None:
        for amp in (self.alpha, self.beta):
            if not (math.isfinite(amp.real) and math.isfinite(amp.imag)):
                raise InvalidStateError(f"non-finite amplitude: {amp!r}")

    def norm_sq(self) -> float:
        """Return |alpha|^2 + |beta|^2."""
        return abs(self.alpha) ** 2 + abs(self.beta) ** 2


def _require_unit_norm(state: PolarizationState, atol: float = NORM_ATOL_CONSUME) -> None:
    if abs(state.norm_sq() - 1.0) > atol:
        raise InvalidStateError(
            f"state norm^2 = {state.norm_sq()!r} deviates from 1 by more than {atol}"
        )


def make_bb84_state(symbol: Bb84Symbol) -> PolarizationState:
    """Construct the pure polarization state encoding a protocol symbol.

    H -> (1, 0), V -> (0, 1), D -> (1, 1)/sqrt(2), A -> (1, -1)/sqrt(2).
    """
    if symbol is Bb84Symbol.H:
        return PolarizationState(1.0 + 0.0j, 0.0 + 0.0j)
    if symbol is Bb84Symbol.V:
        return PolarizationState(0.0 + 0.0j, 1.0 + 0.0j)
    if symbol is Bb84Symbol.D:
        return PolarizationState(_INV_SQRT2 + 0.0j, _INV_SQRT2 + 0.0j)
    if symbol is Bb84Symbol.A:
        return PolarizationState(_INV_SQRT2 + 0.0j, -_INV_SQRT2 + 0.0j)
    raise ValueError(f"unknown symbol: {symbol!r}")


def overlap(a: PolarizationState, b: PolarizationState) -> complex:
    """Return the inner product <a|b>."""
    return a.alpha.conjugate() * b.alpha + a.beta.conjugate() * b.beta


def fidelity(a: PolarizationState, b: PolarizationState) -> float:
    """Return |<a|b>|^2 for two unit-norm states.

    Symmetric in its arguments and invariant under a global phase on
    either state; equals 1 iff the states coincide up to global phase.
    """
    return abs(overlap(a, b)) ** 2


def renormalize(state: PolarizationState) -> PolarizationState:
    """Scale a state to unit norm, preserving the amplitude ratio.

    Raises:
        ZeroNormError: if the squared norm is below the underflow guard.
    """
    norm_sq = state.norm_sq()
    if norm_sq < ZERO_NORM_SQ:
        raise ZeroNormError("cannot renormalize a zero-norm state")
    inv = 1.0 / math.sqrt(norm_sq)
    return PolarizationState(state.alpha * inv, state.beta * inv)


def measure_polarization(
    state: PolarizationState, basis: Basis, rand: float
) -> tuple[Bb84Symbol, PolarizationState]:
    """Projectively measure a state in the given basis.

    The outcome is the first-listed symbol of the basis iff ``rand`` is
    below that symbol's Born probability, which makes the operation
    deterministic for a given deviate.  The returned state is the exact
    eigenstate of the outcome.

    Args:
        state: Unit-norm input state (up to 1e-9 drift).
        basis: Measurement basis.
        rand: Uniform deviate in [0, 1).

    Returns:
        (outcome symbol, collapsed state).

    Raises:
        InvalidStateError: if the input norm deviates from 1 by more than 1e-9.
    """
    _require_unit_norm(state)
    first, second = BASIS_SYMBOLS[basis]
    p_first = fidelity(make_bb84_state(first), state)
    outcome = first if rand < p_first else second
    return outcome, make_bb84_state(outcome)


def states_equal(a: PolarizationState, b: PolarizationState, atol: float = NORM_ATOL_CONSTRUCT) -> bool:
    """Equality up to global phase, via fidelity = 1 within ``atol``."""
    return abs(fidelity(a, b) - 1.0) <= atol


def apply_phase(state: PolarizationState, phase: float) -> PolarizationState:
    """Multiply both amplitudes by a unit-modulus scalar exp(i*phase)."""
    factor = cmath.exp(1j * phase)
    return PolarizationState(state.alpha * factor, state.beta * factor)
