"""Raster images of carpet realisations and CSV output for spectrum curves."""
from __future__ import annotations

import contextlib
import csv
import math
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .formulas import SpectrumCurve
from .model import Ensemble

MAX_CYLINDERS = 10 ** 8


class RenderBudgetError(RuntimeError):
    pass


@dataclass(frozen=True)
class Raster:
    """Occupancy grid; row 0 is the top of the unit square."""

    bitmap: np.ndarray

    @property
    def height(self) -> int:
        return self.bitmap.shape[0]

    @property
    def width(self) -> int:
        return self.bitmap.shape[1]

    def occupied(self) -> int:
        return int(self.bitmap.sum())

    def to_pgm(self, comment: str | None = None) -> bytes:
        """Binary P5 image, 0 for occupied pixels and 255 for background."""
        header = "P5\n"
        if comment:
            for line in comment.splitlines():
                header += f"# {line}\n"
        header += f"{self.width} {self.height}\n255\n"
        pix = np.where(self.bitmap, 0, 255).astype(np.uint8)
        return header.encode("ascii") + pix.tobytes()

    def save_pgm(self, path: str | Path, comment: str | None = None) -> None:
        Path(path).write_bytes(self.to_pgm(comment))


def cylinders(omega: Sequence[int], e: Ensemble, depth: int) -> tuple[np.ndarray, np.ndarray, int, int]:
    """Lower-left corners of all level-``depth`` cylinders in grid units.

    Returns ``(x, y, M, N)``: cylinder ``k`` is
    ``[x_k/M, (x_k+1)/M] x [y_k/N, (y_k+1)/N]``.  Coordinates are Python
    integers held in object arrays when they would overflow int64.
    """
    omega = tuple(getattr(omega, "prefix", omega))
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if len(omega) < depth:
        raise ValueError(f"realization has {len(omega)} entries, depth {depth} requested")
    count = math.prod(e[i].N for i in omega[:depth])
    if count > MAX_CYLINDERS:
        raise RenderBudgetError(f"{count} cylinders exceed the budget of {MAX_CYLINDERS}")
    M = math.prod(e[i].m for i in omega[:depth])
    N = math.prod(e[i].n for i in omega[:depth])
    dtype = np.int64 if max(M, N) < 2 ** 62 else object
    x = np.zeros(1, dtype=dtype)
    y = np.zeros(1, dtype=dtype)
    for i in omega[:depth]:
        p = e[i]
        cells = np.array(p.sorted_cells(), dtype=np.int64)
        x = (x[:, None] * p.m + cells[None, :, 0].astype(dtype)).ravel()
        y = (y[:, None] * p.n + cells[None, :, 1].astype(dtype)).ravel()
    return x, y, M, N


def render_carpet(omega: Sequence[int], e: Ensemble, depth: int, width: int) -> Raster:
    """Mark every pixel meeting a level-``depth`` cylinder (outward rounding)."""
    x, y, M, N = cylinders(omega, e, depth)
    W = H = int(width)
    if M > W:
        warnings.warn(f"column width 1/{M} is below the pixel size 1/{W}", stacklevel=2)
    # half-open pixel ranges [floor(x W / M), ceil((x+1) W / M))
    x0 = (x * W) // M
    x1 = -((-(x + 1) * W) // M)
    y0 = (y * H) // N
    y1 = -((-(y + 1) * H) // N)
    x0, x1, y0, y1 = (np.asarray(v, dtype=np.int64) for v in (x0, x1, y0, y1))
    diff = np.zeros((H + 1, W + 1), dtype=np.int64)
    np.add.at(diff, (y0, x0), 1)
    np.add.at(diff, (y0, x1), -1)
    np.add.at(diff, (y1, x0), -1)
    np.add.at(diff, (y1, x1), 1)
    occ = diff.cumsum(axis=0).cumsum(axis=1)[:H, :W] > 0
    return Raster(occ[::-1].copy())


@contextlib.contextmanager
def _writer(target):
    if hasattr(target, "write"):
        yield target
    else:
        with open(target, "w", newline="") as fh:
            yield fh


def emit_spectrum_csv(curves: Sequence[SpectrumCurve], path: str | Path,
                      header_comment: str | None = None) -> None:
    """One ``theta`` column and one column per curve, 12 significant digits."""
    curves = list(curves)
    if curves:
        ref = curves[0].thetas
        for c in curves[1:]:
            if c.thetas.shape != ref.shape or not np.array_equal(c.thetas, ref):
                raise ValueError("grid mismatch")
    with _writer(path) as fh:
        if header_comment:
            for line in header_comment.splitlines():
                fh.write(f"# {line}\n")
        w = csv.writer(fh)
        w.writerow(["theta"] + [c.label for c in curves])
        if curves:
            for j, t in enumerate(curves[0].thetas):
                w.writerow([f"{t:.12g}"] + [f"{c.values[j]:.12g}" for c in curves])


def emit_dimension_csv(curve: SpectrumCurve, path: str | Path, header_comment: str | None = None) -> None:
    """Columns ``theta,spectrum,box,quasi_assouad,assouad`` for a single ensemble."""
    s = curve.summary
    with _writer(path) as fh:
        if header_comment:
            for line in header_comment.splitlines():
                fh.write(f"# {line}\n")
        w = csv.writer(fh)
        w.writerow(["theta", "spectrum", "box", "quasi_assouad", "assouad"])
        for t, v in zip(curve.thetas, curve.values):
            w.writerow([f"{x:.12g}" for x in (t, v, s.box, s.quasi_assouad, s.assouad)])
