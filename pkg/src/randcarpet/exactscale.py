"""Exact scale arithmetic and the horizontal/vertical stopping times.

Scales are :class:`fractions.Fraction` values in ``(0, 1)``.  A scale raised to a
rational power ``R**(q/p)`` is never materialised as a float: the stopping time
for it is decided by the integer inequality ``num**q * P**p >= den**q`` where
``P`` is the running product of grid sizes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from .model import Ensemble


class InsufficientDepthError(ValueError):
    """The realisation prefix ended before a stopping time was reached."""

    def __init__(self, msg: str, extra_bound: int):
        super().__init__(msg)
        self.extra_bound = extra_bound


def as_scale(value) -> Fraction:
    """Parse ``value`` ("p/q", int pair, Fraction) into a scale in (0, 1)."""
    if isinstance(value, tuple):
        value = Fraction(*value)
    elif isinstance(value, float):
        raise TypeError("scales must be exact rationals, not floats")
    R = Fraction(value)
    if not 0 < R < 1:
        raise ValueError(f"scale must lie in (0, 1), got {R}")
    return R


def as_theta(value) -> Fraction:
    if isinstance(value, tuple):
        value = Fraction(*value)
    elif isinstance(value, float):
        # Floats such as 0.3 are taken at their shortest decimal form.
        value = Fraction(repr(value))
    t = Fraction(value)
    if not 0 < t < 1:
        raise ValueError(f"theta must lie in (0, 1), got {t}")
    return t


def _depth_bound(R: Fraction, exponent: Fraction) -> int:
    # ceil(log(1/R**exponent) / log 2): enough levels when every grid size is >= 2
    return max(1, math.ceil(float(exponent) * math.log2(R.denominator / R.numerator) - 1e-9))


def stopping_time(sizes: Sequence[int], R: Fraction, exponent: Fraction = Fraction(1)) -> int:
    """Smallest k >= 1 with ``prod(sizes[:k]) ** -1 <= R ** exponent``.

    ``sizes`` are the grid sizes along the realisation (``m`` for the
    horizontal time, ``n`` for the vertical one).
    """
    R = as_scale(R)
    exponent = Fraction(exponent)
    if exponent <= 0:
        raise ValueError("exponent must be positive")
    q, p = exponent.numerator, exponent.denominator
    lhs_scale = R.numerator ** q
    target = R.denominator ** q
    # float log guides the search; the exact test decides near the boundary
    target_log = q * (math.log(R.denominator) - math.log(R.numerator))
    slack = 1e-9 * (1.0 + target_log)
    P = 1
    acc = 0.0
    for k, s in enumerate(sizes, 1):
        P *= s
        acc += math.log(s)
        est = p * acc
        if est < target_log - slack:
            continue
        if est > target_log + slack or lhs_scale * P ** p >= target:
            return k
    raise InsufficientDepthError(
        f"insufficient realization depth: {len(sizes)} levels do not reach scale {R}**{exponent}",
        _depth_bound(R, exponent) - len(sizes),
    )


def _sizes(omega: Sequence[int], e: Ensemble, name: str) -> list[int]:
    vals = e.stat_values(name)
    return [vals[i - 1] for i in omega]


def k1(omega: Sequence[int], e: Ensemble, R, exponent=Fraction(1)) -> int:
    """Horizontal stopping time: levels until the column width is <= R."""
    return stopping_time(_sizes(_prefix(omega), e, "m"), as_scale(R), Fraction(exponent))


def k2(omega: Sequence[int], e: Ensemble, R, exponent=Fraction(1)) -> int:
    """Vertical stopping time: levels until the row height is <= R."""
    return stopping_time(_sizes(_prefix(omega), e, "n"), as_scale(R), Fraction(exponent))


def _prefix(omega) -> Sequence[int]:
    return getattr(omega, "prefix", omega)


class PowerScale(NamedTuple):
    """``lo <= R**(1/theta) <= hi``; ``lo == hi`` when the power is exact."""

    lo: Fraction
    hi: Fraction

    @property
    def exact(self) -> bool:
        return self.lo == self.hi


def _iroot_floor(x: int, k: int) -> int:
    """floor(x ** (1/k)) for x >= 0."""
    if x < 2:
        return x
    r = 1 << -(-x.bit_length() // k)
    while r ** k > x:
        r = ((k - 1) * r + x // r ** (k - 1)) // k
    while (r + 1) ** k <= x:
        r += 1
    return r


def power_scale(R, theta) -> PowerScale:
    """``R ** (1/theta)`` exactly, or a bracket with ``hi / lo < 2``."""
    R = as_scale(R)
    theta = as_theta(theta)
    exp = 1 / theta
    q, p = exp.numerator, exp.denominator
    a, b = R.numerator ** q, R.denominator ** q
    ra, rb = _iroot_floor(a, p), _iroot_floor(b, p)
    if ra ** p == a and rb ** p == b:
        x = Fraction(ra, rb)
        return PowerScale(x, x)
    # x = (a/b)**(1/p); bracket floor(D*x)/D <= x < (floor(D*x)+1)/D
    # starting from unit fractions and refining until the ratio is < 2
    c = _iroot_floor(b // a, p)
    if c >= 2:
        if c ** p * a == b:
            return PowerScale(Fraction(1, c), Fraction(1, c))
        return PowerScale(Fraction(1, c + 1), Fraction(1, c))
    D = 4
    while True:
        j = _iroot_floor(D ** p * a // b, p)
        if j >= 2:
            return PowerScale(Fraction(j, D), Fraction(j + 1, D))
        D *= 4


@dataclass(frozen=True)
class RatioStats:
    k1R: int
    k2R: int
    k1Rt: int
    k2Rt: int

    @property
    def ratios(self) -> dict[str, float]:
        return {
            "k1R/k2Rt": self.k1R / self.k2Rt,
            "k1R/k2R": self.k1R / self.k2R,
            "k1R/k1Rt": self.k1R / self.k1Rt,
            "k2R/k2Rt": self.k2R / self.k2Rt,
        }

    def to_dict(self) -> dict:
        return {"k1R": self.k1R, "k2R": self.k2R, "k1Rt": self.k1Rt, "k2Rt": self.k2Rt,
                "ratios": self.ratios}


def ratio_stats(omega: Sequence[int], e: Ensemble, R, theta) -> RatioStats:
    """Stopping times at ``R`` and ``R**(1/theta)`` and their ratios."""
    R = as_scale(R)
    exp = 1 / as_theta(theta)
    return RatioStats(
        k1R=k1(omega, e, R),
        k2R=k2(omega, e, R),
        k1Rt=k1(omega, e, R, exp),
        k2Rt=k2(omega, e, R, exp),
    )


def scale_from_vertical_product(omega: Sequence[int], e: Ensemble, q: int) -> Fraction:
    """``R_q``: the product of the first ``q`` row heights, so that k2(R_q) = q."""
    ns = _sizes(_prefix(omega)[:q], e, "n")
    if len(ns) < q:
        raise InsufficientDepthError(f"insufficient realization depth: need {q} levels", q - len(ns))
    return Fraction(1, math.prod(ns))
