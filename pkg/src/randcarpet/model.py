"""Grid patterns, weighted ensembles and their geometric averages.

A :class:`Pattern` is one Bedford-McMullen grid system: an ``m x n`` grid of the
unit square (``n > m >= 2``) with a set of chosen cells.  Cells are ``(col, row)``
pairs with the origin in the bottom-left corner, so cell ``(c, r)`` is the
rectangle ``[c/m, (c+1)/m] x [r/n, (r+1)/n]``.

An :class:`Ensemble` attaches probability weights to a finite list of patterns.
Indices into an ensemble are 1-based throughout the public API, matching the
label set ``{1, ..., |Lambda|}``.
"""
from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

WEIGHT_TOL = 1e-12

STAT_NAMES = ("m", "n", "N", "B", "C")


class ValidationError(ValueError):
    """Raised when a pattern or ensemble violates its invariants."""


@dataclass(frozen=True)
class Pattern:
    m: int
    n: int
    cells: frozenset

    def __init__(self, m: int, n: int, cells: Iterable[Sequence[int]], *, check: bool = True):
        pairs = [tuple(map(int, c)) for c in cells]
        dupes = []
        if len(set(pairs)) != len(pairs):
            dupes = [c for c, k in Counter(pairs).items() if k > 1]
        object.__setattr__(self, "m", int(m))
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "cells", frozenset(pairs))
        problems = pattern_violations(self)
        if dupes:
            problems.append(f"duplicate cell {dupes[0]}")
        # immutable, so ensembles can reuse the verdict
        self.__dict__["_violations"] = tuple(problems)
        if check and problems:
            raise ValidationError("; ".join(problems))

    @cached_property
    def column_counts(self) -> dict[int, int]:
        """Number of chosen cells in each occupied column."""
        return dict(sorted(Counter(c for c, _ in self.cells).items()))

    @property
    def N(self) -> int:
        return len(self.cells)

    @property
    def B(self) -> int:
        return len(self.column_counts)

    @property
    def C(self) -> int:
        return max(self.column_counts.values())

    @cached_property
    def maximal_columns(self) -> tuple[int, ...]:
        return tuple(c for c, k in self.column_counts.items() if k == self.C)

    def stat(self, name: str) -> int:
        if name not in STAT_NAMES:
            raise ValueError(f"unknown statistic {name!r}; expected one of {STAT_NAMES}")
        return getattr(self, name)

    def sorted_cells(self) -> list[tuple[int, int]]:
        return sorted(self.cells)

    def to_dict(self) -> dict:
        return {"m": self.m, "n": self.n, "cells": [list(c) for c in self.sorted_cells()]}

    @classmethod
    def full(cls, m: int, n: int) -> "Pattern":
        return cls(m, n, [(c, r) for c in range(m) for r in range(n)])


def pattern_violations(p: Pattern) -> list[str]:
    out = []
    if p.m < 2:
        out.append(f"requires m >= 2 (got m={p.m})")
    if p.n <= p.m:
        out.append(f"requires n > m (got m={p.m}, n={p.n})")
    if not p.cells:
        out.append("empty cell set")
    m, n = p.m, p.n
    bad = [c for c in p.cells if len(c) != 2 or not (0 <= c[0] < m and 0 <= c[1] < n)]
    for cell in sorted(bad):
        if len(cell) != 2:
            out.append(f"cell {cell} is not a (col, row) pair")
            continue
        c, r = cell
        if not (0 <= c < p.m and 0 <= r < p.n):
            out.append(f"cell {cell} outside {p.m}x{p.n} grid")
    return out


def pattern_stats(p: Pattern) -> tuple[int, int, int]:
    """Return ``(N, B, C)``: cell count, occupied columns, largest column."""
    return p.N, p.B, p.C


@dataclass(frozen=True)
class Averages:
    """Weighted geometric averages, stored as natural logs."""

    logN: float
    logB: float
    logC: float
    logm: float
    logn: float

    @property
    def Nbar(self) -> float:
        return math.exp(self.logN)

    @property
    def Bbar(self) -> float:
        return math.exp(self.logB)

    @property
    def Cbar(self) -> float:
        return math.exp(self.logC)

    @property
    def mbar(self) -> float:
        return math.exp(self.logm)

    @property
    def nbar(self) -> float:
        return math.exp(self.logn)

    def log(self, name: str) -> float:
        return getattr(self, "log" + name)


@dataclass(frozen=True)
class Ensemble:
    patterns: tuple[Pattern, ...]
    weights: tuple[float, ...]

    def __init__(self, patterns: Sequence[Pattern], weights: Sequence[float] | None = None,
                 *, renormalize: bool = False, check: bool = True):
        patterns = tuple(patterns)
        if weights is None:
            weights = [1.0 / len(patterns)] * len(patterns) if patterns else []
        weights = tuple(float(w) for w in weights)
        if renormalize and weights:
            total = math.fsum(weights)
            weights = tuple(w / total for w in weights)
        object.__setattr__(self, "patterns", patterns)
        object.__setattr__(self, "weights", weights)
        if check:
            report = validate_ensemble(self)
            if report:
                raise ValidationError("; ".join(report))

    def __len__(self) -> int:
        return len(self.patterns)

    def __getitem__(self, index: int) -> Pattern:
        """Pattern with 1-based label ``index``."""
        if not 1 <= index <= len(self.patterns):
            raise IndexError(f"index {index} out of range 1..{len(self.patterns)}")
        return self.patterns[index - 1]

    @property
    def deterministic(self) -> bool:
        return len(self.patterns) == 1

    @property
    def m_max(self) -> int:
        return max(p.m for p in self.patterns)

    @property
    def n_max(self) -> int:
        return max(p.n for p in self.patterns)

    def stat_values(self, name: str) -> tuple[int, ...]:
        return tuple(p.stat(name) for p in self.patterns)

    @cached_property
    def averages(self) -> Averages:
        return weighted_averages(self)

    def single(self, index: int) -> "Ensemble":
        """The deterministic ensemble made of pattern ``index`` alone."""
        return Ensemble([self[index]], [1.0])

    def to_dict(self) -> dict:
        return {"patterns": [p.to_dict() for p in self.patterns], "weights": list(self.weights)}

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def validate_ensemble(e: Ensemble) -> list[str]:
    """List every invariant violation of ``e``; an empty list means admissible."""
    report = []
    k = len(e.patterns)
    if k == 0:
        report.append("ensemble has no patterns")
    if len(e.weights) != k:
        report.append(f"{k} patterns but {len(e.weights)} weights")
    for i, p in enumerate(e.patterns, 1):
        if not isinstance(p, Pattern):
            report.append(f"pattern {i} is not a Pattern")
            continue
        found = p.__dict__.get("_violations")
        if found is None:
            found = pattern_violations(p)
        report.extend(f"pattern {i}: {msg}" for msg in found)
    if k == 1 and len(e.weights) == 1 and e.weights[0] != 1.0:
        report.append(f"single pattern requires weight exactly 1 (got {e.weights[0]!r})")
    if k > 1 and len(e.weights) == k:
        for i, w in enumerate(e.weights, 1):
            if not (0.0 < w < 1.0) or math.isnan(w):
                report.append(f"weight {i} = {w!r} not in (0, 1)")
        total = math.fsum(e.weights)
        if abs(total - 1.0) > WEIGHT_TOL:
            report.append(f"weights sum to {total:.12g}")
    return report


def weighted_averages(e: Ensemble) -> Averages:
    report = validate_ensemble(e)
    if report:
        raise ValidationError("; ".join(report))

    def avg(name):
        return math.fsum(w * math.log(p.stat(name)) for p, w in zip(e.patterns, e.weights))

    return Averages(logN=avg("N"), logB=avg("B"), logC=avg("C"), logm=avg("m"), logn=avg("n"))


_PATTERN_KEYS = {"m", "n", "cells"}
_ENSEMBLE_KEYS = {"patterns", "weights"}


def ensemble_from_dict(data: dict, *, renormalize: bool = False) -> Ensemble:
    if not isinstance(data, dict):
        raise ValidationError("ensemble JSON must be an object")
    unknown = set(data) - _ENSEMBLE_KEYS
    if unknown:
        raise ValidationError(f"unknown ensemble keys: {sorted(unknown)}")
    if "patterns" not in data:
        raise ValidationError("missing key 'patterns'")
    patterns = []
    for i, pd in enumerate(data["patterns"], 1):
        if not isinstance(pd, dict):
            raise ValidationError(f"pattern {i} must be an object")
        unknown = set(pd) - _PATTERN_KEYS
        if unknown:
            raise ValidationError(f"pattern {i}: unknown keys {sorted(unknown)}")
        missing = _PATTERN_KEYS - set(pd)
        if missing:
            raise ValidationError(f"pattern {i}: missing keys {sorted(missing)}")
        try:
            patterns.append(Pattern(pd["m"], pd["n"], pd["cells"]))
        except ValidationError as exc:
            raise ValidationError(f"pattern {i}: {exc}") from None
    weights = data.get("weights")
    if weights is None and len(patterns) == 1:
        weights = [1.0]
    if weights is None:
        raise ValidationError("missing key 'weights'")
    return Ensemble(patterns, weights, renormalize=renormalize)


def load_ensemble(path: str | Path, *, renormalize: bool = False) -> Ensemble:
    with open(path) as fh:
        return ensemble_from_dict(json.load(fh), renormalize=renormalize)


def save_ensemble(e: Ensemble, path: str | Path) -> None:
    Path(path).write_text(e.to_json(indent=1) + "\n")


# Concrete systems used across demos and tests.  The grids and derived counts
# of the two-pattern example match the reference values (19x21 with N=20,
# B=10, C=8; 2x15 with N=5, B=2, C=4); the cell layouts themselves are ours.

def generic_pattern_1() -> Pattern:
    heights = {0: 8, 2: 3, 4: 1, 6: 1, 8: 1, 10: 1, 12: 1, 14: 1, 16: 1, 18: 2}
    cells = []
    for col, k in heights.items():
        start = (col * 5) % (21 - k + 1)
        cells.extend((col, start + r) for r in range(k))
    return Pattern(19, 21, cells)


def generic_pattern_2() -> Pattern:
    return Pattern(2, 15, [(0, 1), (0, 5), (0, 9), (0, 13), (1, 7)])


def generic_example() -> Ensemble:
    """The two-pattern, equal-weight example ensemble."""
    return Ensemble([generic_pattern_1(), generic_pattern_2()], [0.5, 0.5])


def small_test_pattern() -> Pattern:
    """2x4 grid with cells (0,0), (1,1), (1,2): N=3, B=2, C=2."""
    return Pattern(2, 4, [(0, 0), (1, 1), (1, 2)])
