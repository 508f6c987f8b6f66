"""The Bernstein operator B_n f and its approximation errors."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numba import njit
from scipy.special import gammaln

from .funcmodel import FunctionSpec
from .numerics import GridConfig, NormEstimate, grid_sup, memoize

__all__ = [
    "CASTELJAU_MAX_N",
    "SampleVector",
    "sample",
    "bernstein_eval",
    "approx_error_norm",
    "voronovskaja_residual",
    "voronovskaja_residual_norm",
    "voronovskaja_gap",
]

CASTELJAU_MAX_N = 64

# binomial weights further than this many standard deviations from n*x are
# below exp(-72) relative to the mode and are skipped
_WINDOW_SD = 12.0
_WINDOW_PAD = 30


@dataclass(frozen=True, eq=False)
class SampleVector:
    """The n + 1 samples f(k/n), k = 0..n, that determine B_n f."""

    n: int
    values: np.ndarray

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        values = np.array(self.values, dtype=float)
        if values.shape != (self.n + 1,):
            raise ValueError(f"expected {self.n + 1} samples, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("samples must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)


def sample(f: FunctionSpec, n: int) -> SampleVector:
    if n < 1:
        raise ValueError("n must be positive")
    return _sample(f, n)


@lru_cache(maxsize=32)
def _sample(f: FunctionSpec, n: int) -> SampleVector:
    return SampleVector(n, f(np.arange(n + 1) / n))


@njit(cache=True)
def _casteljau_kernel(values, x, out):
    m = values.size
    b = np.empty(m)
    for r in range(x.size):
        t = x[r]
        s = 1.0 - t
        b[:] = values
        for level in range(m - 1, 0, -1):
            for k in range(level):
                b[k] = s * b[k] + t * b[k + 1]
        out[r] = b[0]


def _casteljau(values: np.ndarray, x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    _casteljau_kernel(values, x, out)
    return out


@lru_cache(maxsize=8)
def _log_binomials(n: int) -> np.ndarray:
    lg = gammaln(np.arange(n + 1) + 1.0)
    return gammaln(n + 1.0) - lg - lg[::-1]


@njit(cache=True)
def _log_space_kernel(values, logc, x, out):
    n = values.size - 1
    for r in range(x.size):
        xi = x[r]
        if xi <= 0.0:
            out[r] = values[0]
            continue
        if xi >= 1.0:
            out[r] = values[n]
            continue
        lx = math.log(xi)
        l1x = math.log1p(-xi)
        sd = math.sqrt(n * xi * (1.0 - xi))
        lo = max(0, int(math.floor(n * xi - _WINDOW_SD * sd)) - _WINDOW_PAD)
        hi = min(n, int(math.ceil(n * xi + _WINDOW_SD * sd)) + _WINDOW_PAD)
        # the largest weight sits at the binomial mode
        mode = min(n, int(math.floor((n + 1) * xi)))
        top = logc[mode] + mode * lx + (n - mode) * l1x
        s = 0.0
        cs = 0.0
        w = 0.0
        cw = 0.0
        for k in range(lo, hi + 1):
            e = math.exp(logc[k] + k * lx + (n - k) * l1x - top)
            v = e * values[k]
            t = s + v
            if abs(s) >= abs(v):
                cs += (s - t) + v
            else:
                cs += (v - t) + s
            s = t
            t = w + e
            if w >= e:
                cw += (w - t) + e
            else:
                cw += (e - t) + w
            w = t
        # the weights sum to one exactly; dividing by their computed sum
        # cancels the common rounding of the log-gamma terms
        out[r] = (s + cs) / (w + cw)


def _log_space(values: np.ndarray, x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    _log_space_kernel(values, _log_binomials(len(values) - 1), x, out)
    return out


def bernstein_eval(s: SampleVector, x, method: str = "auto"):
    """Evaluate B_n f at ``x`` (scalar or array) from its samples.

    ``method`` is ``"casteljau"`` (exact recursion, quadratic in n),
    ``"log"`` (log-gamma weights shifted by the mode's, Neumaier sums) or ``"auto"``,
    which uses de Casteljau up to ``CASTELJAU_MAX_N``.
    """
    scalar = np.ndim(x) == 0
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any((xa < 0.0) | (xa > 1.0)) or not np.all(np.isfinite(xa)):
        raise ValueError("x must lie in [0, 1]")
    if method == "auto":
        method = "casteljau" if s.n <= CASTELJAU_MAX_N else "log"
    if method == "casteljau":
        out = _casteljau(s.values, xa)
    elif method == "log":
        out = _log_space(s.values, xa)
    else:
        raise ValueError(f"unknown method {method!r}")
    return float(out[0]) if scalar else out


def _grid_sup(objective, cfg: GridConfig) -> NormEstimate:
    return grid_sup(
        objective,
        0.0,
        1.0,
        points=cfg.grid_points,
        rounds=cfg.refine_rounds,
        golden_iters=cfg.golden_iters,
        max_candidates=cfg.max_candidates,
    )


@memoize(4096)
def approx_error_norm(f: FunctionSpec, n: int, cfg: GridConfig = GridConfig()) -> NormEstimate:
    """Estimate ||f - B_n f|| on [0, 1]."""
    s = sample(f, n)
    return _grid_sup(lambda x: np.abs(f(x) - bernstein_eval(s, x)), cfg)


def _residual(f: FunctionSpec, s: SampleVector, x):
    jet = f.jet(x, 2)
    return bernstein_eval(s, x) - jet[0] - x * (1.0 - x) * jet[2] / (2 * s.n)


def voronovskaja_residual(f: FunctionSpec, n: int, x):
    """B_n f(x) - f(x) - x(1 - x) f''(x) / (2n)."""
    f.require_order(2, "the Voronovskaja residual")
    xa = np.asarray(x, dtype=float)
    if np.any((xa < 0.0) | (xa > 1.0)):
        raise ValueError("x must lie in [0, 1]")
    r = _residual(f, sample(f, n), xa)
    return float(r) if np.ndim(r) == 0 else r


@memoize(4096)
def voronovskaja_residual_norm(f: FunctionSpec, n: int, cfg: GridConfig = GridConfig()) -> NormEstimate:
    f.require_order(2, "the Voronovskaja residual")
    s = sample(f, n)
    return _grid_sup(lambda x: np.abs(_residual(f, s, x)), cfg)


def voronovskaja_gap(f: FunctionSpec, n: int, cfg: GridConfig = GridConfig()) -> float:
    """||n (B_n f - f) - phi^2 f'' / 2||, which tends to 0 for f in C^2."""
    return n * voronovskaja_residual_norm(f, n, cfg).value
