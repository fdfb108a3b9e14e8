"""Approximate squares and covering counts inside a realisation.

For an approximate ``R``-square ``Q`` and the small scale ``r = R**(1/theta)``
four stopping times matter: ``k2(R) <= k1(R)`` and ``k2(r) <= k1(r)``.  In
case (i), ``k1(R) < k2(r)``, the number of approximate ``r``-squares meeting
``Q`` is at most

    prod_{k2(R) < l <= k1(R)} C  *  prod_{k1(R) < l <= k2(r)} N  *  prod_{k2(r) < l <= k1(r)} B

and in case (ii), ``k1(R) >= k2(r)``, at most

    prod_{k2(R) < l <= k2(r)} C  *  prod_{k1(R) < l <= k1(r)} B .

Each approximate ``r``-square is covered by 4 sets of diameter ``r``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exactscale import InsufficientDepthError, as_scale, as_theta, k1, k2
from .model import Ensemble

DEFAULT_BUDGET = 10 ** 7


class BudgetError(RuntimeError):
    """Raised when an enumeration would exceed its node budget."""

    def __init__(self, msg: str, log_estimate: float):
        super().__init__(msg)
        self.log_estimate = log_estimate


def lower_constant(e: Ensemble) -> Fraction:
    """The constant K = 1/(4 m_max n_max) used in the lower covering bound."""
    return Fraction(1, 4 * e.m_max * e.n_max)


def _prefix(omega) -> tuple[int, ...]:
    return tuple(getattr(omega, "prefix", omega))


def required_depth(e: Ensemble, R, theta) -> int:
    """Levels that always suffice to reach ``k1(R**(1/theta))``."""
    R, theta = as_scale(R), as_theta(theta)
    m_min = min(p.m for p in e.patterns)
    logr = float(1 / theta) * (math.log(R.denominator) - math.log(R.numerator))
    return math.ceil(logr / math.log(m_min) + 1e-9) + 1


def _ready(omega, e: Ensemble, R, theta):
    """Extend a seeded realisation far enough; explicit prefixes are used as given."""
    if hasattr(omega, "extend") and getattr(omega, "seed", None) is not None:
        omega = omega.extend(required_depth(e, R, theta))
    return _prefix(omega)


@dataclass(frozen=True)
class Times:
    k2R: int
    k1R: int
    k2r: int
    k1r: int

    @property
    def case(self) -> str:
        return "i" if self.k1R < self.k2r else "ii"


def stopping_times(omega, e: Ensemble, R, theta) -> Times:
    R, theta = as_scale(R), as_theta(theta)
    w = _ready(omega, e, R, theta)
    exp = 1 / theta
    return Times(k2R=k2(w, e, R), k1R=k1(w, e, R), k2r=k2(w, e, R, exp), k1r=k1(w, e, R, exp))


def case_of(omega, e: Ensemble, R, theta) -> str:
    """``"i"`` when ``k1(R) < k2(R**(1/theta))``, else ``"ii"``."""
    return stopping_times(omega, e, R, theta).case


def count_ranges(t: Times) -> dict[str, tuple[int, int]]:
    """Inclusive level ranges of the products, keyed by the statistic used."""
    if t.case == "i":
        return {"C": (t.k2R + 1, t.k1R), "N": (t.k1R + 1, t.k2r), "B": (t.k2r + 1, t.k1r)}
    return {"C": (t.k2R + 1, t.k2r), "B": (t.k1R + 1, t.k1r)}


@dataclass(frozen=True)
class ApproximateSquare:
    """Approximate ``R``-square determined by the digits ``i_1 .. i_{k1(R)}``.

    ``x``/``y`` locate the square: it is
    ``[x/W, (x+1)/W] x [y/H, (y+1)/H]`` with ``W = prod_{l<=k1} m`` and
    ``H = prod_{l<=k2} n``.
    """

    omega: tuple[int, ...]
    R: Fraction
    digits: tuple[tuple[int, int], ...]
    k1: int
    k2: int
    x: int
    y: int
    W: int
    H: int

    @property
    def base(self) -> Fraction:
        return Fraction(1, self.W)

    @property
    def height(self) -> Fraction:
        return Fraction(1, self.H)

    @property
    def rect(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        """``(a, b, c, d)`` for ``[a, b] x [c, d]``."""
        return (Fraction(self.x, self.W), Fraction(self.x + 1, self.W),
                Fraction(self.y, self.H), Fraction(self.y + 1, self.H))


def approximate_square(omega, e: Ensemble, R, digits: Sequence[Sequence[int]]) -> ApproximateSquare:
    R = as_scale(R)
    w = _prefix(omega)
    kk1, kk2 = k1(w, e, R), k2(w, e, R)
    digits = tuple(tuple(d) for d in digits)
    if len(digits) < kk1:
        raise ValueError(f"need {kk1} digits, got {len(digits)}")
    digits = digits[:kk1]
    x = y = 0
    W = H = 1
    for level, (col, row) in enumerate(digits, 1):
        p = e[w[level - 1]]
        if (col, row) not in p.cells:
            raise ValueError(f"digit {(col, row)} at level {level} is not a cell of pattern {w[level - 1]}")
        x, W = x * p.m + col, W * p.m
        if level <= kk2:
            y, H = y * p.n + row, H * p.n
    return ApproximateSquare(w, R, digits, kk1, kk2, x, y, W, H)


def maximal_column_witness(omega, e: Ensemble, R) -> ApproximateSquare:
    """Square whose digits always sit in a fullest column (lowest index, lowest row)."""
    R = as_scale(R)
    w = _prefix(omega)
    kk1 = k1(w, e, R)
    digits = []
    for i in w[:kk1]:
        p = e[i]
        col = p.maximal_columns[0]
        row = min(r for c, r in p.cells if c == col)
        digits.append((col, row))
    return approximate_square(w, e, R, digits)


@dataclass
class CoverReport:
    case_tag: str
    times: Times
    ranges: dict[str, tuple[int, int]]
    log_upper: float
    log_lower_witness: float
    exact_count: int | None = None
    depth_budget_hit: bool = False
    nodes: int | None = None
    extra: dict = field(default_factory=dict)

    @property
    def upper_bound_log(self) -> float:
        """Natural log of the bound ``4 * exp(log_upper)``."""
        return math.log(4) + self.log_upper

    def to_dict(self) -> dict:
        return {
            "case": self.case_tag,
            "stopping_times": {"k2R": self.times.k2R, "k1R": self.times.k1R,
                               "k2r": self.times.k2r, "k1r": self.times.k1r},
            "ranges": {k: list(v) for k, v in self.ranges.items()},
            "log_upper": self.log_upper,
            "log_lower_witness": self.log_lower_witness,
            "exact_count": None if self.exact_count is None else str(self.exact_count),
            "depth_budget_hit": self.depth_budget_hit,
            **self.extra,
        }


def _levels(w, lo, hi):
    return w[lo - 1:hi]


def range_products(omega, e: Ensemble, t: Times, witness: ApproximateSquare | None = None) -> dict[str, int]:
    """Exact integer products over each range.

    With ``witness`` the ``C`` factors are the witness digits' column sizes.
    """
    w = _prefix(omega)
    out = {}
    for stat, (lo, hi) in count_ranges(t).items():
        if stat == "C" and witness is not None:
            vals = [e[i].column_counts[witness.digits[l - 1][0]]
                    for l, i in zip(range(lo, hi + 1), _levels(w, lo, hi))]
        else:
            vals = [e[i].stat(stat) for i in _levels(w, lo, hi)]
        out[stat] = math.prod(vals)
    return out


def _log_sum(omega, e, t, witness=None) -> float:
    w = _prefix(omega)
    terms = []
    for stat, (lo, hi) in count_ranges(t).items():
        for l, i in zip(range(lo, hi + 1), _levels(w, lo, hi)):
            if stat == "C" and witness is not None:
                terms.append(math.log(e[i].column_counts[witness.digits[l - 1][0]]))
            else:
                terms.append(math.log(e[i].stat(stat)))
    return math.fsum(terms)


def covering_upper(omega, e: Ensemble, R, theta) -> CoverReport:
    """Product bound valid for every approximate ``R``-square, plus the witness value."""
    R, theta = as_scale(R), as_theta(theta)
    w = _ready(omega, e, R, theta)
    t = stopping_times(w, e, R, theta)
    if len(w) < t.k1r:
        raise InsufficientDepthError("insufficient realization depth", t.k1r - len(w))
    wit = maximal_column_witness(w, e, R)
    return CoverReport(
        case_tag=t.case,
        times=t,
        ranges=count_ranges(t),
        log_upper=_log_sum(w, e, t),
        log_lower_witness=_log_sum(w, e, t, wit),
    )


def brute_force_count(omega, e: Ensemble, R, theta, Q: ApproximateSquare | None = None,
                      budget: int = DEFAULT_BUDGET) -> tuple[int, int]:
    """Count approximate ``R**(1/theta)``-squares meeting ``Q`` by enumeration.

    Cylinders of level ``k2(r)`` are found by walking the digit tree and
    keeping every child whose rectangle overlaps ``Q`` in positive area; the
    distinct level-``k1(r)`` column intervals inside each of them (and inside
    the column strip of ``Q``) are then collected.  Returns ``(count, nodes)``.
    """
    R, theta = as_scale(R), as_theta(theta)
    w = _ready(omega, e, R, theta)
    t = stopping_times(w, e, R, theta)
    if len(w) < t.k1r:
        raise InsufficientDepthError("insufficient realization depth", t.k1r - len(w))
    if Q is None:
        Q = maximal_column_witness(w, e, R)
    est = _log_sum(w, e, t, Q)
    if est > math.log(budget):
        raise BudgetError(
            f"depth too large: about exp({est:.2f}) approximate squares exceed budget {budget}", est)

    pats = [e[i] for i in w[:t.k1r]]
    cols = [tuple(p.column_counts) for p in pats]
    # Q as [Qx, Qx+1]/QW by [Qy, Qy+1]/QH
    Qx, QW, Qy, QH = Q.x, Q.W, Q.y, Q.H
    nodes = 0

    def x_overlaps(x, Ml):
        return x * QW < (Qx + 1) * Ml and Qx * Ml < (x + 1) * QW

    def y_overlaps(y, Nl):
        return y * QH < (Qy + 1) * Nl and Qy * Nl < (y + 1) * QH

    # walk down to level k2(r)
    frontier = [(0, 0)]
    Ml = Nl = 1
    for level in range(1, t.k2r + 1):
        p = pats[level - 1]
        Ml, Nl = Ml * p.m, Nl * p.n
        nxt = []
        for x, y in frontier:
            for c, r in p.sorted_cells():
                cx, cy = x * p.m + c, y * p.n + r
                if x_overlaps(cx, Ml) and y_overlaps(cy, Nl):
                    nxt.append((cx, cy))
        nodes += len(nxt)
        if nodes > budget:
            raise BudgetError(f"depth too large: enumeration passed {budget} nodes", est)
        frontier = nxt

    total = 0
    Mk2r = Ml
    for x0, _ in frontier:
        xs = {x0}
        Mx = Mk2r
        for level in range(t.k2r + 1, t.k1r + 1):
            p = pats[level - 1]
            Mx *= p.m
            xs = {x * p.m + c for x in xs for c in cols[level - 1] if x_overlaps(x * p.m + c, Mx)}
            nodes += len(xs)
            if nodes > budget:
                raise BudgetError(f"depth too large: enumeration passed {budget} nodes", est)
        total += len(xs)
    return total, nodes


def cover_report(omega, e: Ensemble, R, theta, exact: bool = False,
                 budget: int = DEFAULT_BUDGET) -> CoverReport:
    rep = covering_upper(omega, e, R, theta)
    if exact:
        try:
            rep.exact_count, rep.nodes = brute_force_count(omega, e, R, theta, budget=budget)
        except BudgetError:
            rep.depth_budget_hit = True
            raise
    return rep


def empirical_theta_exponent(omega, e: Ensemble, R, theta, mode: str = "formula",
                             budget: int = DEFAULT_BUDGET) -> float:
    """Covering exponent of the witness square: log(count) / log(R / R**(1/theta))."""
    R, theta = as_scale(R), as_theta(theta)
    if mode == "formula":
        logc = covering_upper(omega, e, R, theta).log_lower_witness
    elif mode == "exact":
        logc = math.log(brute_force_count(omega, e, R, theta, budget=budget)[0])
    else:
        raise ValueError(f"unknown mode {mode!r}")
    log_inv_R = math.log(R.denominator) - math.log(R.numerator)
    return logc / (float(1 / theta - 1) * log_inv_R)
