"""Interferometer cascade: exact detector probabilities for the attack layout.

A single interferometer unit splits a photon on a polarizing beamsplitter
(H transmitted, V reflected), kicks each arm's momentum, and recombines;
the net effect is to entangle polarization with a discrete path label
(H accumulates R, V accumulates L).  The attack layout chains three such
stages: branches whose newest path label disagrees with the previous one
are routed to a recombiner feeding a final beamsplitter in the D/A basis
(the two "inner" detectors); branches that agree all the way through land
on the outer H/V detectors.

Path labels here are perfectly distinguishable (the strong-measurement
limit); the overlapping-pointer regime is handled in :mod:`bb84sim.pointer`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping

from .states import (
    Bb84Symbol,
    PolarizationState,
    ZERO_NORM_SQ,
    make_bb84_state,
)

_INV_SQRT2 = 1.0 / math.sqrt(2.0)

#: Number of chained interferometer stages in the attack layout.
N_STAGES = 3


class PathLabel(Enum):
    """Discrete path taken after one interferometer stage."""

    L = "L"
    R = "R"


class DetectorId(Enum):
    """The four detectors of the attack layout."""

    OUTER_H = "OuterH"
    OUTER_V = "OuterV"
    INNER_D = "InnerD"
    INNER_A = "InnerA"


#: Fixed detector order used for sampling and serialization.
DETECTOR_ORDER: tuple[DetectorId, ...] = (
    DetectorId.OUTER_H,
    DetectorId.OUTER_V,
    DetectorId.INNER_D,
    DetectorId.INNER_A,
)


@dataclass(frozen=True, slots=True)
class Branch:
    """One coherent branch: definite linear polarization, path history, amplitude."""

    pol: Bb84Symbol
    history: tuple[PathLabel, ...]
    amp: complex

    def __post_init__(self) -> None:
        if self.pol not in (Bb84Symbol.H, Bb84Symbol.V):
            raise ValueError(f"branch polarization must be H or V, got {self.pol!r}")
        if len(self.history) > N_STAGES:
            raise ValueError(f"history longer than {N_STAGES} stages: {self.history!r}")

    def amp_sq(self) -> float:
        return abs(self.amp) ** 2


@dataclass(frozen=True, slots=True)
class BranchState:
    """Normalized superposition of branches, merged on identical (pol, history)."""

    branches: tuple[Branch, ...]

    def __post_init__(self) -> None:
        seen: set[tuple[Bb84Symbol, tuple[PathLabel, ...]]] = set()
        total = 0.0
        for branch in self.branches:
            key = (branch.pol, branch.history)
            if key in seen:
                raise ValueError(f"duplicate branch key {key!r}; merge before constructing")
            seen.add(key)
            total += branch.amp_sq()
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"branch weights sum to {total!r}, expected 1")


def _merge_branches(branches: Iterable[Branch]) -> tuple[Branch, ...]:
    """Coherently merge branches sharing (pol, history); prune zero-amplitude ones."""
    merged: dict[tuple[Bb84Symbol, tuple[PathLabel, ...]], complex] = {}
    for branch in branches:
        key = (branch.pol, branch.history)
        merged[key] = merged.get(key, 0.0 + 0.0j) + branch.amp
    return tuple(
        Branch(pol, history, amp)
        for (pol, history), amp in merged.items()
        if abs(amp) ** 2 >= ZERO_NORM_SQ
    )


def interferometer_unit(state: PolarizationState) -> BranchState:
    """Apply one interferometer stage to a fresh polarization state.

    The H component exits with path label R, the V component with L;
    components below the underflow guard are pruned.
    """
    raw = (
        Branch(Bb84Symbol.H, (PathLabel.R,), state.alpha),
        Branch(Bb84Symbol.V, (PathLabel.L,), state.beta),
    )
    return BranchState(_merge_branches(raw))


def _stage_children(branch: Branch) -> list[Branch]:
    """Route one branch through the polarizing beamsplitter of the next stage.

    The beamsplitter projects onto H (toward R) and V (toward L); since
    a branch carries a definite linear polarization, one projection
    coefficient is 1 and the other 0.
    """
    coeff_h = 1.0 if branch.pol is Bb84Symbol.H else 0.0
    coeff_v = 1.0 if branch.pol is Bb84Symbol.V else 0.0
    children = (
        Branch(Bb84Symbol.H, branch.history + (PathLabel.R,), branch.amp * coeff_h),
        Branch(Bb84Symbol.V, branch.history + (PathLabel.L,), branch.amp * coeff_v),
    )
    return [child for child in children if child.amp_sq() >= ZERO_NORM_SQ]


@dataclass(frozen=True, slots=True)
class DetectorDistribution:
    """Born probabilities for the four detectors; sums to 1."""

    probs: Mapping[DetectorId, float]

    def __post_init__(self) -> None:
        total = 0.0
        for det in DETECTOR_ORDER:
            p = self.probs.get(det, 0.0)
            if p < 0.0:
                raise ValueError(f"negative probability for {det}: {p!r}")
            total += p
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"detector probabilities sum to {total!r}, expected 1")

    def __getitem__(self, det: DetectorId) -> float:
        return self.probs.get(det, 0.0)


def propagate_cascade(state: PolarizationState) -> tuple[BranchState, DetectorDistribution]:
    """Propagate a unit-norm state through the full three-stage layout.

    Stage 1 entangles polarization with a path label.  At stages 2 and 3,
    each output whose new label disagrees with the branch's previous label
    is diverted to the recombiner; agreeing outputs continue.  The
    recombined beam is split in the D/A basis onto the two inner
    detectors, while the surviving all-R / all-L branches land on the
    outer H / V detectors.  Recombination is coherent: amplitudes add.

    Returns:
        (final branch state, detector distribution).
    """
    current = list(interferometer_unit(state).branches)
    diverted: list[Branch] = []
    for _ in range(1, N_STAGES):
        advanced: list[Branch] = []
        for branch in current:
            for child in _stage_children(branch):
                if child.history[-1] is child.history[-2]:
                    advanced.append(child)
                else:
                    diverted.append(child)
        current = advanced

    p_outer_h = sum(b.amp_sq() for b in current if b.pol is Bb84Symbol.H)
    p_outer_v = sum(b.amp_sq() for b in current if b.pol is Bb84Symbol.V)

    # Coherent recombination of every diverted branch into one beam.
    sum_h = sum((b.amp for b in diverted if b.pol is Bb84Symbol.H), 0.0 + 0.0j)
    sum_v = sum((b.amp for b in diverted if b.pol is Bb84Symbol.V), 0.0 + 0.0j)
    amp_inner_d = (sum_h + sum_v) * _INV_SQRT2
    amp_inner_a = (sum_h - sum_v) * _INV_SQRT2

    dist = DetectorDistribution(
        {
            DetectorId.OUTER_H: p_outer_h,
            DetectorId.OUTER_V: p_outer_v,
            DetectorId.INNER_D: abs(amp_inner_d) ** 2,
            DetectorId.INNER_A: abs(amp_inner_a) ** 2,
        }
    )
    final = BranchState(_merge_branches(current + diverted))
    return final, dist


def khokhlov_predicted_detector(symbol: Bb84Symbol) -> DetectorId:
    """Detector the attack scheme claims each input symbol would reach.

    Pure lookup (H -> outer H, V -> outer V, D -> inner D, A -> inner A),
    kept so the discrepancy with :func:`propagate_cascade` can be
    quantified: the inner detectors in fact receive zero probability.
    """
    return {
        Bb84Symbol.H: DetectorId.OUTER_H,
        Bb84Symbol.V: DetectorId.OUTER_V,
        Bb84Symbol.D: DetectorId.INNER_D,
        Bb84Symbol.A: DetectorId.INNER_A,
    }[symbol]


def detector_implied_symbol(detector: DetectorId) -> Bb84Symbol:
    """Inverse of :func:`khokhlov_predicted_detector` (total on all detectors)."""
    return {
        DetectorId.OUTER_H: Bb84Symbol.H,
        DetectorId.OUTER_V: Bb84Symbol.V,
        DetectorId.INNER_D: Bb84Symbol.D,
        DetectorId.INNER_A: Bb84Symbol.A,
    }[detector]


def sample_detector(dist: DetectorDistribution, rand: float) -> DetectorId:
    """Inverse-CDF sample over the fixed detector order; deterministic given ``rand``."""
    cumulative = 0.0
    last_positive = DETECTOR_ORDER[0]
    for det in DETECTOR_ORDER:
        p = dist[det]
        if p > 0.0:
            last_positive = det
        cumulative += p
        if rand < cumulative:
            return det
    return last_positive


def cascade_state_for_detector(detector: DetectorId) -> PolarizationState:
    """Polarization state implied by a detector click (used when resending)."""
    return make_bb84_state(detector_implied_symbol(detector))
