"""Almost-sure dimension formulas for random 1-variable carpets.

Every formula is evaluated from the log-domain weighted averages of the
ensemble.  Write ``lX = sum_i p_i log X_i`` for ``X`` in ``m, n, N, B, C``; then

* box dimension            ``lB/lm + (lN - lB)/ln``
* quasi-Assouad dimension  ``lB/lm + lC/ln``
* Assouad dimension        ``max_i log B_i/log m_i + max_i log C_i/log n_i``
* phase transition         ``theta* = lm/ln``

and the Assouad spectrum is the quasi-Assouad value for ``theta > theta*`` and

    ((lB + theta lC - theta lN)/lm + (lN - lB - theta lC)/ln) / (1 - theta)

for ``theta <= theta*``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .model import Ensemble, Pattern


def _check_theta(theta: float) -> float:
    theta = float(theta)
    if not 0.0 < theta < 1.0:
        raise ValueError(f"theta must lie in (0, 1), got {theta}")
    return theta


def phase_transition(e: Ensemble) -> float:
    a = e.averages
    return a.logm / a.logn


def quasi_assouad(e: Ensemble) -> float:
    a = e.averages
    return a.logB / a.logm + a.logC / a.logn


def box_dimension(e: Ensemble) -> float:
    a = e.averages
    return a.logB / a.logm + (a.logN - a.logB) / a.logn


def assouad_dimension(e: Ensemble) -> float:
    """Maximal horizontal plus maximal vertical exponent over the patterns.

    The two maxima may come from different patterns.
    """
    horiz = max(math.log(p.B) / math.log(p.m) for p in e.patterns)
    vert = max(math.log(p.C) / math.log(p.n) for p in e.patterns)
    return horiz + vert


def _branch_one(e: Ensemble, theta: float) -> float:
    a = e.averages
    first = (a.logB + theta * a.logC - theta * a.logN) / a.logm
    second = (a.logN - a.logB - theta * a.logC) / a.logn
    return (first + second) / (1.0 - theta)


def assouad_spectrum(e: Ensemble, theta: float) -> float:
    theta = _check_theta(theta)
    if theta <= phase_transition(e):
        return _branch_one(e, theta)
    return quasi_assouad(e)


def spectrum_min_form(e: Ensemble, theta: float) -> float:
    """The spectrum written through the box and quasi-Assouad dimensions."""
    theta = _check_theta(theta)
    box, qa = box_dimension(e), quasi_assouad(e)
    a = e.averages
    inner = qa - (qa - box) * a.logn / a.logm
    return min((box - theta * inner) / (1.0 - theta), qa)


@dataclass(frozen=True)
class DimensionSummary:
    box: float
    quasi_assouad: float
    assouad: float
    phase_transition_theta: float

    def to_dict(self) -> dict:
        return {
            "box": self.box,
            "quasi_assouad": self.quasi_assouad,
            "assouad": self.assouad,
            "phase_transition_theta": self.phase_transition_theta,
        }


def summarize(e: Ensemble) -> DimensionSummary:
    return DimensionSummary(
        box=box_dimension(e),
        quasi_assouad=quasi_assouad(e),
        assouad=assouad_dimension(e),
        phase_transition_theta=phase_transition(e),
    )


@dataclass(frozen=True)
class SpectrumCurve:
    thetas: np.ndarray
    values: np.ndarray
    summary: DimensionSummary
    label: str = field(default="spectrum")


def spectrum_curve(e: Ensemble, grid: Sequence[float], label: str = "spectrum") -> SpectrumCurve:
    thetas = np.asarray(grid, dtype=float)
    if thetas.ndim != 1 or thetas.size == 0:
        raise ValueError("theta grid must be a non-empty 1-d sequence")
    if np.any(thetas <= 0) or np.any(thetas >= 1):
        raise ValueError("theta grid must lie in (0, 1)")
    if np.any(np.diff(thetas) <= 0):
        raise ValueError("theta grid must be strictly ascending")
    values = np.array([assouad_spectrum(e, t) for t in thetas])
    return SpectrumCurve(thetas, values, summarize(e), label)


def theta_grid(a: float, b: float, n: int) -> np.ndarray:
    """``n`` evenly spaced points of ``[a, b]``; endpoints must lie in (0, 1)."""
    if n < 1:
        raise ValueError("grid needs at least one point")
    return np.linspace(a, b, n)


def interior_grid(n: int) -> np.ndarray:
    """``n`` evenly spaced interior points ``k/(n+1)`` of (0, 1)."""
    return np.arange(1, n + 1) / (n + 1)


def _extreme_sizes(epsilon: float) -> tuple[int, int]:
    # smallest m with log2/log(2m) <= eps/2, then smallest n with
    # log(m+1)/log(n(m+1)) <= eps/2; decided on the float expressions
    # actually used by the formulas, with an exponential search then bisection
    half = epsilon / 2.0

    def smallest(ok, lo):
        hi = lo
        while not ok(hi):
            lo, hi = hi, hi * 2
        while lo < hi:
            mid = (lo + hi) // 2
            if ok(mid):
                hi = mid
            else:
                lo = mid + 1
        return hi

    m = smallest(lambda m: math.log(2) / math.log(2 * m) <= half, 2)
    n = smallest(lambda n: math.log(m + 1) / math.log(n * (m + 1)) <= half, 3)
    return m, n


def build_extreme_ensemble(epsilon: float) -> Ensemble:
    """Mix a horizontal and a vertical line segment so that qA <= epsilon < 2 = A.

    Pattern 1 is one full row of a ``2 x n`` grid, pattern 2 one full column of
    an ``m x (m+1)`` grid, with equal weights.
    """
    epsilon = float(epsilon)
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    m, n = _extreme_sizes(epsilon)
    col = Pattern(m, m + 1, [(0, r) for r in range(m + 1)])
    while True:
        row = Pattern(2, n, [(0, 0), (1, 0)])
        e = Ensemble([row, col], [0.5, 0.5])
        # the weighted-average route can differ from the closed form by an ulp
        if quasi_assouad(e) <= epsilon:
            return e
        n += 1
