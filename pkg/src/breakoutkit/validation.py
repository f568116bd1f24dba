"""Rule-based validation of candidate picks via azimuthal symmetry.

True breakouts form as near-diametral pairs on opposite borehole walls, so
a depth is kept only when it carries exactly two candidates whose azimuthal
separation falls inside a symmetric window about 180 degrees. One-sided
features (keyseats), isolated spurious detections, and crowded depths are
all rejected. The filter is deliberately conservative: genuinely
asymmetric breakouts are rejected too and counted as false negatives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import (
    STATUS_REJECTED_COUNT,
    STATUS_REJECTED_SEPARATION,
    STATUS_VALIDATED,
    BreakoutPick,
    ParameterError,
    PickSet,
)

# Acceptance window for the circular separation of a candidate pair,
# inclusive on both ends.
SEPARATION_MIN_DEG = 160.0
SEPARATION_MAX_DEG = 200.0


def circ360(x: float) -> float:
    """Map an angle to [0, 360)."""
    if not math.isfinite(x):
        raise ParameterError(f"angle must be finite, got {x}")
    return ((x % 360.0) + 360.0) % 360.0


@dataclass(frozen=True, slots=True)
class DepthGroup:
    """All candidate picks sharing one measured depth."""

    depth: float
    picks: tuple[BreakoutPick, ...]

    def __post_init__(self):
        for p in self.picks:
            if p.depth != self.depth:
                raise ParameterError(
                    f"pick depth {p.depth} differs from group depth {self.depth}"
                )


@dataclass(frozen=True, slots=True)
class ValidationOutcome:
    """Partition of the input into retained and rejected picks.

    Rejected picks keep their rejection reason in the status field; nothing
    is deleted, so before/after metrics can be computed from a single run.
    """

    retained: PickSet
    rejected: PickSet


def separation_in_window(phi1: float, phi2: float) -> bool:
    """True iff the circular separation of two azimuths lies in the
    near-diametral window.

    Symmetric in its arguments: swapping them maps the separation d to
    360 - d, and the window is symmetric about 180.
    """
    d = circ360(phi2 - phi1)
    return SEPARATION_MIN_DEG <= d <= SEPARATION_MAX_DEG


def validate_depth(group: DepthGroup, source: str = "synthetic") -> ValidationOutcome:
    """Apply the symmetry criteria to one depth.

    Exactly two candidates are required, and their separation must fall in
    [160, 200] degrees (boundaries included); otherwise every pick at the
    depth is rejected with the applicable reason.
    """
    picks = group.picks
    empty = PickSet((), source)
    if len(picks) != 2:
        rejected = tuple(p.with_status(STATUS_REJECTED_COUNT) for p in picks)
        return ValidationOutcome(empty, PickSet(rejected, source))
    if separation_in_window(picks[0].azimuth_deg, picks[1].azimuth_deg):
        retained = tuple(p.with_status(STATUS_VALIDATED) for p in picks)
        return ValidationOutcome(PickSet(retained, source), empty)
    rejected = tuple(p.with_status(STATUS_REJECTED_SEPARATION) for p in picks)
    return ValidationOutcome(empty, PickSet(rejected, source))


def validate(s: PickSet, depth_grid_step: float) -> ValidationOutcome:
    """Validate a whole pick set, one depth group at a time.

    Grouping uses exact equality of depth values: the input is expected to
    lie on a common depth grid (native rows, or the evaluation grid after
    resampling) whose step is ``depth_grid_step``. Depths are not binned or
    snapped here.
    """
    if not depth_grid_step > 0:
        raise ParameterError(f"depth_grid_step must be > 0, got {depth_grid_step}")
    groups: dict[float, list[BreakoutPick]] = {}
    for p in s:
        groups.setdefault(p.depth, []).append(p)
    retained: list[BreakoutPick] = []
    rejected: list[BreakoutPick] = []
    for depth in sorted(groups):
        outcome = validate_depth(DepthGroup(depth, tuple(groups[depth])), s.source)
        retained.extend(outcome.retained)
        rejected.extend(outcome.rejected)
    return ValidationOutcome(
        PickSet(tuple(retained), s.source), PickSet(tuple(rejected), s.source)
    )
