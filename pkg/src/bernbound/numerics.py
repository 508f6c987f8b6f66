"""Grid configuration, compensated summation and sup-norm estimation."""

from __future__ import annotations

import functools
import inspect
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numba import njit

__all__ = [
    "GridConfig",
    "NormEstimate",
    "neumaier_sum",
    "golden_max",
    "grid_sup",
    "memoize",
]

INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class GridConfig:
    """Resolution of every sup estimate in the package.

    ``grid_points``/``refine_rounds`` drive 1-D sup norms; the ``modulus_*``
    fields drive the (h, x) scan of the Ditzian-Totik modulus and the
    ``classical_*`` fields the unweighted moduli.
    """

    grid_points: int = 4097
    refine_rounds: int = 3
    golden_iters: int = 10
    max_candidates: int = 8
    modulus_h: int = 513
    modulus_x: int = 2049
    modulus_refine: int = 1
    classical_h: int = 1025
    classical_x: int = 2049

    def __post_init__(self):
        if self.grid_points < 3:
            raise ValueError("grid_points must be at least 3")
        if self.refine_rounds < 0 or self.modulus_refine < 0:
            raise ValueError("refinement rounds must be nonnegative")
        if min(self.modulus_h, self.modulus_x, self.classical_h, self.classical_x) < 2:
            raise ValueError("modulus grids need at least 2 points per axis")


@dataclass(frozen=True)
class NormEstimate:
    """Grid-plus-refinement estimate of a supremum; never above the true sup."""

    value: float
    argmax: float
    grid_size: int
    refinement_rounds: int
    kind: str = "sup-underestimate"


def memoize(maxsize: int):
    """lru_cache keyed on the fully bound arguments, so defaults and keywords share entries."""

    def deco(fn):
        sig = inspect.signature(fn)
        cached = functools.lru_cache(maxsize=maxsize)(fn)

        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            bound = sig.bind(*args, **kwargs)
            bound.apply_defaults()
            return cached(*bound.args)

        wrapper.cache_clear = cached.cache_clear
        wrapper.cache_info = cached.cache_info
        return wrapper

    return deco


@njit(cache=True)
def neumaier_sum(a: np.ndarray) -> float:
    """Compensated (Kahan-Babuska-Neumaier) sum of a 1-D array."""
    s = 0.0
    c = 0.0
    for v in a:
        t = s + v
        if abs(s) >= abs(v):
            c += (s - t) + v
        else:
            c += (v - t) + s
        s = t
    return s + c


def golden_max(objective: Callable[[np.ndarray], np.ndarray], lo, hi, iters: int):
    """Vectorized golden-section maximization over independent brackets.

    Returns ``(x, value)`` arrays of the best point evaluated per bracket.
    """
    lo = np.array(lo, dtype=float, ndmin=1)
    hi = np.array(hi, dtype=float, ndmin=1)
    c = hi - INVPHI * (hi - lo)
    d = lo + INVPHI * (hi - lo)
    fc = objective(c)
    fd = objective(d)
    best_x = np.where(fd > fc, d, c)
    best_v = np.maximum(fc, fd)
    for _ in range(iters):
        left = fc >= fd
        hi = np.where(left, d, hi)
        lo = np.where(left, lo, c)
        new = np.where(left, hi - INVPHI * (hi - lo), lo + INVPHI * (hi - lo))
        fnew = objective(new)
        c, d = np.where(left, new, d), np.where(left, c, new)
        fc, fd = np.where(left, fnew, fd), np.where(left, fc, fnew)
        better = fnew > best_v
        best_x = np.where(better, new, best_x)
        best_v = np.where(better, fnew, best_v)
    return best_x, best_v


def _local_maxima(v: np.ndarray) -> np.ndarray:
    n = len(v)
    if n == 1:
        return np.array([0])
    left = np.empty(n, dtype=bool)
    right = np.empty(n, dtype=bool)
    left[0] = True
    left[1:] = v[1:] >= v[:-1]
    right[-1] = True
    right[:-1] = v[:-1] >= v[1:]
    return np.flatnonzero(left & right)


def grid_sup(
    objective: Callable[[np.ndarray], np.ndarray],
    a: float = 0.0,
    b: float = 1.0,
    points: int = 4097,
    rounds: int = 3,
    golden_iters: int = 10,
    max_candidates: int = 8,
) -> NormEstimate:
    """Estimate ``sup_{[a, b]} objective`` by a uniform scan plus golden refinement.

    ``objective`` maps an array of abscissae to an array of values. The scan's
    local maxima (the ``max_candidates`` largest) are each refined by
    golden-section search inside their bracketing grid cells; each round runs
    ``golden_iters`` further iterations. Ties go to the smallest abscissa.
    """
    xs = np.linspace(a, b, points)
    v = np.asarray(objective(xs), dtype=float)
    if not np.all(np.isfinite(v)):
        raise FloatingPointError("objective is not finite on the scan grid")
    i = int(np.argmax(v))
    best_x, best_v = float(xs[i]), float(v[i])

    if rounds > 0 and points > 2:
        peaks = _local_maxima(v)
        order = np.lexsort((xs[peaks], -v[peaks]))
        peaks = peaks[order[:max_candidates]]
        lo = xs[np.maximum(peaks - 1, 0)]
        hi = xs[np.minimum(peaks + 1, points - 1)]
        for _ in range(rounds):
            rx, rv = golden_max(objective, lo, hi, golden_iters)
            j = int(np.argmax(rv))
            if rv[j] > best_v or (rv[j] == best_v and rx[j] < best_x):
                best_x, best_v = float(rx[j]), float(rv[j])
            # shrink each bracket around its incumbent for the next round
            half = (hi - lo) * INVPHI ** golden_iters
            lo = np.maximum(rx - half, lo)
            hi = np.minimum(rx + half, hi)
    return NormEstimate(best_v, best_x, points, rounds)
