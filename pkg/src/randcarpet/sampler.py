"""Realisations ``omega`` drawn from the product measure.

Position ``k`` (0-based) of a sampled realisation is a pure function of
``(seed, k)``: it is the ``k``-th raw 64-bit output of numpy's counter-based
Philox4x64 generator keyed by ``seed``, reduced to a 53-bit uniform and pushed
through the inverse CDF of the weights.  Prefixes are therefore stable under
extension and any window can be generated without the ones before it.
"""
from __future__ import annotations

import logging
import secrets
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .model import Ensemble

log = logging.getLogger(__name__)

_BLOCK = 4  # Philox4x64 emits four words per counter value


def uniforms(seed: int, start: int, count: int) -> np.ndarray:
    """53-bit uniforms in [0, 1) for positions ``start .. start+count-1``."""
    if count <= 0:
        return np.empty(0)
    bg = np.random.Philox(key=int(seed))
    bg.advance(start // _BLOCK)
    off = start % _BLOCK
    raw = bg.random_raw(count + off)[off:]
    return (raw >> np.uint64(11)).astype(np.float64) * (1.0 / 9007199254740992.0)


def _draw(weights: Sequence[float], u: np.ndarray) -> np.ndarray:
    cum = np.cumsum(np.asarray(weights, dtype=float))
    # u == cum[i] goes to the smaller index i
    idx = np.searchsorted(cum, u, side="left")
    return np.minimum(idx, len(cum) - 1) + 1


def fresh_seed() -> int:
    while True:
        s = secrets.randbits(64)
        if s:
            return s


@dataclass(frozen=True)
class Omega:
    """A realisation prefix; ``seed`` is None for user-supplied prefixes."""

    prefix: tuple[int, ...]
    seed: int | None
    weights: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.prefix)

    def __iter__(self):
        return iter(self.prefix)

    def __getitem__(self, item):
        return self.prefix[item]

    @property
    def explicit(self) -> bool:
        return self.seed is None

    def extend(self, length: int) -> "Omega":
        """Return a realisation with at least ``length`` entries."""
        if length <= len(self.prefix):
            return self
        if self.seed is None:
            raise ValueError(
                f"explicit realization has {len(self.prefix)} entries, {length} required")
        extra = _draw(self.weights, uniforms(self.seed, len(self.prefix), length - len(self.prefix)))
        return Omega(self.prefix + tuple(int(i) for i in extra), self.seed, self.weights)

    def to_dict(self) -> dict:
        return {"seed": "explicit" if self.seed is None else str(self.seed),
                "omega": list(self.prefix)}


def sample_omega(e: Ensemble, seed: int, length: int) -> Omega:
    """Draw the first ``length`` entries of a realisation.

    ``seed == 0`` requests a fresh seed from the OS; the seed actually used is
    logged and stored on the result.
    """
    if length < 1:
        raise ValueError("length must be >= 1")
    seed = int(seed)
    if not 0 <= seed < 2 ** 64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    if seed == 0:
        seed = fresh_seed()
        log.info("derived seed %d from OS entropy", seed)
    prefix = _draw(e.weights, uniforms(seed, 0, length))
    return Omega(tuple(int(i) for i in prefix), seed, tuple(e.weights))


def explicit_omega(indices: Sequence[int], e: Ensemble | None = None) -> Omega:
    indices = tuple(int(i) for i in indices)
    if not indices:
        raise ValueError("empty prefix")
    size = len(e) if e is not None else None
    for i in indices:
        if i < 1 or (size is not None and i > size):
            raise ValueError(f"index out of range: {i}")
    weights = tuple(e.weights) if e is not None else ()
    return Omega(indices, None, weights)


def sample_array(e: Ensemble, seed: int, length: int) -> np.ndarray:
    """Same draws as :func:`sample_omega` as a 1-based int array (``seed`` != 0)."""
    return _draw(e.weights, uniforms(seed, 0, length))


def trial_seed(master_seed: int, trial: int) -> int:
    """Per-trial 64-bit seed, a pure function of ``(master_seed, trial)``."""
    ss = np.random.SeedSequence(entropy=int(master_seed), spawn_key=(int(trial),))
    s = int(ss.generate_state(1, np.uint64)[0])
    return s or 1
