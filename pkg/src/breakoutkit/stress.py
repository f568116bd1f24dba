"""Maximum horizontal stress from breakout width, and its sensitivity to
width errors.

For a breakout of full angular width W at the borehole wall, the classical
strength-based bound gives

    S_Hmax = (C_ef + P_f) / (1 - 2 cos(pi - W))
             - S_hmin * (1 + 2 cos(pi - W)) / (1 - 2 cos(pi - W))

with C_ef the effective rock-mass strength, P_f the pore pressure and
S_hmin the minimum horizontal stress. The denominator vanishes at
W = 120 degrees, a pole of the formula.

Angles are degrees at the interface. The cosine is evaluated with a
degree-argument routine so that quadrant widths (e.g. exactly 90 degrees)
hit their exact cosine values.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from scipy.special import cosdg

from .core import ParameterError, SingularityError

SINGULAR_WIDTH_DEG = 120.0
SINGULARITY_GUARD_DEG = 1e-6


@dataclass(frozen=True, slots=True)
class StressParams:
    """Stress-state and strength inputs, all in MPa."""

    shmin: float
    pf: float
    cef: float

    def __post_init__(self):
        if not self.cef > 0:
            raise ParameterError(f"cef must be > 0, got {self.cef}")
        if self.pf < 0:
            raise ParameterError(f"pf must be >= 0, got {self.pf}")
        if not self.shmin > 0:
            raise ParameterError(f"shmin must be > 0, got {self.shmin}")


def shmax(width_deg: float, prm: StressParams) -> float:
    """Maximum horizontal stress (MPa) implied by a breakout width."""
    if not 0.0 < width_deg < 360.0:
        raise ParameterError(f"width must lie in (0, 360), got {width_deg}")
    if abs(width_deg - SINGULAR_WIDTH_DEG) < SINGULARITY_GUARD_DEG:
        raise SingularityError(
            f"width {width_deg} is at the {SINGULAR_WIDTH_DEG} degree pole"
        )
    c = -float(cosdg(width_deg))  # cos(pi - W) = -cos(W)
    denom = 1.0 - 2.0 * c
    if abs(denom) < 1e-12:
        raise SingularityError(f"denominator vanishes at width {width_deg}")
    return (prm.cef + prm.pf) / denom - prm.shmin * (1.0 + 2.0 * c) / denom


def width_sensitivity(width0_deg: float, dwidth_deg: float, prm: StressParams) -> float:
    """Change in S_Hmax (MPa) caused by a width error of ``dwidth_deg`` on
    a baseline width of ``width0_deg``.

    Because S_hmin is held fixed, this equals the induced error in the
    differential stress S_Hmax - S_hmin.
    """
    return abs(shmax(width0_deg + dwidth_deg, prm) - shmax(width0_deg, prm))


def sensitivity_sweep(
    width_range: tuple[float, float],
    dwidth_deg: float,
    prm: StressParams,
    step_deg: float = 1.0,
) -> list[tuple[float, float]]:
    """Tabulate ``width_sensitivity`` over a range of baseline widths.

    Baselines whose evaluation (at the baseline or the perturbed width)
    falls inside the singularity guard band are skipped with a warning,
    splitting the sweep around the pole.
    """
    lo, hi = width_range
    if not (0.0 < lo <= hi < 360.0):
        raise ParameterError(f"bad width range {width_range}")
    if not step_deg > 0:
        raise ParameterError(f"step must be > 0, got {step_deg}")
    rows: list[tuple[float, float]] = []
    skipped = []
    w = lo
    while w <= hi + 1e-12:
        try:
            rows.append((w, width_sensitivity(w, dwidth_deg, prm)))
        except SingularityError:
            skipped.append(w)
        w += step_deg
    if skipped:
        warnings.warn(
            f"sweep split around the {SINGULAR_WIDTH_DEG} degree pole; "
            f"skipped baselines {skipped}",
            stacklevel=2,
        )
    return rows


def sweep_csv(rows: list[tuple[float, float]]) -> str:
    lines = ["width0_deg,delta_shmax_mpa"]
    lines += [f"{w:.6f},{d:.6f}" for w, d in rows]
    return "\n".join(lines) + "\n"
