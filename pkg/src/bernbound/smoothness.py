"""Weighted norms, the second-order Ditzian-Totik modulus and classical moduli."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .funcmodel import FunctionSpec
from .numerics import GridConfig, NormEstimate, golden_max, grid_sup, memoize

__all__ = [
    "ModulusResult",
    "KInterval",
    "phi",
    "weighted_norm",
    "second_difference",
    "admissible_interval",
    "dt_inner_sup",
    "dt_modulus2",
    "classical_modulus",
    "kfunctional_bounds",
    "K_LOWER",
    "K_UPPER",
]

# constants of the two-sided K-functional / modulus equivalence at t = 1/sqrt(n)
K_LOWER = 1.0 / 16.0
K_UPPER = 10.0

_H_CHUNK = 32


@dataclass(frozen=True)
class ModulusResult:
    value: float
    delta: float
    h_star: float
    x_star: float
    grid_h: int
    grid_x: int


@dataclass(frozen=True)
class KInterval:
    """Bracket [lower, upper] known to contain K_phi^2(f, t^2)."""

    t: float
    lower: float
    upper: float

    def __post_init__(self):
        if not 0.0 <= self.lower <= self.upper:
            raise ValueError(f"invalid bracket [{self.lower}, {self.upper}]")


def phi(x):
    """The weight sqrt(x(1 - x))."""
    xa = np.asarray(x, dtype=float)
    out = np.sqrt(np.maximum(xa * (1.0 - xa), 0.0))
    return float(out) if out.ndim == 0 else out


@memoize(1024)
def weighted_norm(f: FunctionSpec, weight_power: int, deriv_order: int, cfg: GridConfig = GridConfig()) -> NormEstimate:
    """Estimate sup |phi^p f^(k)| over [0, 1]."""
    if weight_power < 0:
        raise ValueError("weight_power must be nonnegative")
    f.require_order(deriv_order, "the weighted norm")

    def objective(x):
        w = phi(x) ** weight_power if weight_power else 1.0
        return np.abs(w * f.deriv(x, deriv_order))

    return grid_sup(
        objective,
        points=cfg.grid_points,
        rounds=cfg.refine_rounds,
        golden_iters=cfg.golden_iters,
        max_candidates=cfg.max_candidates,
    )


def admissible_interval(h):
    """Points x where x +- h phi(x) stays in [0, 1]: [h^2/(1+h^2), 1/(1+h^2)]."""
    h2 = np.asarray(h, dtype=float) ** 2
    return h2 / (1.0 + h2), 1.0 / (1.0 + h2)


def _h_max(x: float) -> float:
    """Largest h for which x is admissible."""
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return math.sqrt(min(x / (1.0 - x), (1.0 - x) / x))


def second_difference(f: FunctionSpec, h, x):
    """|f(x + h phi(x)) - 2 f(x) + f(x - h phi(x))|, broadcasting h against x."""
    h = np.asarray(h, dtype=float)
    x = np.asarray(x, dtype=float)
    step = h * phi(x)
    up = np.minimum(x + step, 1.0)
    down = np.maximum(x - step, 0.0)
    return np.abs(f(up) - 2.0 * f(x) + f(down))


def _x_rows(h: np.ndarray, nx: int) -> np.ndarray:
    a, b = admissible_interval(h)
    t = np.linspace(0.0, 1.0, nx)
    return np.minimum(a[:, None] + (b - a)[:, None] * t, b[:, None])


def dt_inner_sup(f: FunctionSpec, h: float, cfg: GridConfig = GridConfig()) -> NormEstimate:
    """sup over the admissible interval of the second difference at step h."""
    if not 0.0 <= h <= 1.0:
        raise ValueError("h must lie in [0, 1]")
    a, b = admissible_interval(h)
    return grid_sup(
        lambda x: second_difference(f, h, np.clip(x, a, b)),
        float(a),
        float(b),
        points=cfg.modulus_x,
        rounds=cfg.refine_rounds,
        golden_iters=cfg.golden_iters,
        max_candidates=cfg.max_candidates,
    )


@memoize(8192)
def dt_modulus2(f: FunctionSpec, delta: float, cfg: GridConfig = GridConfig()) -> ModulusResult:
    """Second-order Ditzian-Totik modulus omega_phi^2(f, delta).

    Scans a ``modulus_h`` x ``modulus_x`` grid of (h, x) with x uniform on the
    admissible interval of each h, then runs coordinate-wise golden-section
    refinement around the best cell. Ties go to the lexicographically
    smallest (h, x).
    """
    if not 0.0 < delta <= 1.0:
        raise ValueError("delta must lie in (0, 1]")
    hs = np.linspace(0.0, delta, cfg.modulus_h)
    best = (-1.0, 0, 0)
    for start in range(0, len(hs), _H_CHUNK):
        h = hs[start : start + _H_CHUNK]
        v = second_difference(f, h[:, None], _x_rows(h, cfg.modulus_x))
        j = int(np.argmax(v))
        if v.flat[j] > best[0]:
            best = (float(v.flat[j]), start + j // cfg.modulus_x, j % cfg.modulus_x)
    _, jh, jx = best
    h_star = float(hs[jh])
    x_star = float(_x_rows(hs[jh : jh + 1], cfg.modulus_x)[0, jx])
    value = float(second_difference(f, h_star, x_star))

    dh = delta / (cfg.modulus_h - 1)
    a, b = admissible_interval(h_star)
    dx = (b - a) / (cfg.modulus_x - 1)
    for _ in range(cfg.modulus_refine):
        # x-direction at fixed h
        a, b = admissible_interval(h_star)
        lo, hi = max(a, x_star - dx), min(b, x_star + dx)
        if hi > lo:
            rx, rv = golden_max(lambda x: second_difference(f, h_star, np.clip(x, a, b)), lo, hi, 3 * cfg.golden_iters)
            cand = float(np.clip(rx[0], a, b))
            cv = float(second_difference(f, h_star, cand))
            if cv > value:
                x_star, value = cand, cv
        # h-direction at fixed x
        top = min(delta, h_star + dh, _h_max(x_star))
        lo = max(0.0, h_star - dh)
        if top > lo:
            rh, rv = golden_max(lambda h: second_difference(f, h, x_star), lo, top, 3 * cfg.golden_iters)
            cand = float(np.clip(rh[0], lo, top))
            ca, cb = admissible_interval(cand)
            cv = float(second_difference(f, cand, x_star))
            if cv > value and ca <= x_star <= cb:
                h_star, value = cand, cv
        dx *= 0.5
        dh *= 0.5
    return ModulusResult(value, float(delta), h_star, x_star, cfg.modulus_h, cfg.modulus_x)


def _window_extrema(g: np.ndarray, w: int):
    """Max and min of g[i:i+w] for every i with i + w <= len(g) (van Herk/Gil-Werman)."""
    n = len(g)
    blocks = -(-n // w)
    pad = blocks * w - n
    out = []
    for fill, acc in ((-np.inf, np.maximum), (np.inf, np.minimum)):
        gp = np.concatenate([g, np.full(pad, fill)]).reshape(blocks, w)
        prefix = acc.accumulate(gp, axis=1).ravel()
        suffix = acc.accumulate(gp[:, ::-1], axis=1)[:, ::-1].ravel()
        count = n - w + 1
        out.append(acc(suffix[:count], prefix[w - 1 : w - 1 + count]))
    return out


@memoize(4096)
def classical_modulus(
    g_source: FunctionSpec, use_deriv: int, order: int, delta: float, cfg: GridConfig = GridConfig()
) -> ModulusResult:
    """Unweighted modulus omega_r(g, delta), r in {1, 2}, of g = f^(use_deriv).

    h runs over ``classical_h`` multiples of a step eta ~ delta/(classical_h-1)
    with 1/eta an integer, and x over the matching lattice on [0, 1]. For r = 1
    every lattice point is scanned (sliding-window oscillation); for r = 2 each
    h row is thinned to at most ``classical_x`` lattice points.
    """
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    if delta <= 0.0:
        raise ValueError("delta must be positive")
    g_source.require_order(use_deriv, "the classical modulus")
    m = int(math.ceil((cfg.classical_h - 1) / min(delta, 1.0) - 1e-9))
    shifts = min(int(math.floor(delta * m + 1e-9)), m // order)
    eta = 1.0 / m
    g = g_source.deriv(np.arange(m + 1) * eta, use_deriv)

    if order == 1:
        wmax, wmin = _window_extrema(g, shifts + 1)
        osc = wmax - wmin
        i = int(np.argmax(osc))
        window = g[i : i + shifts + 1]
        j1, j2 = sorted((int(np.argmin(window)), int(np.argmax(window))))
        value = float(abs(window[j2] - window[j1]))
        return ModulusResult(value, float(delta), (j2 - j1) * eta, (i + j1) * eta, shifts + 1, m + 1)

    s = np.arange(shifts + 1)
    span = m - 2 * s
    stride = np.maximum(1, -(-(span + 1) // cfg.classical_x))
    cols = np.arange(cfg.classical_x)
    best = (-1.0, 0, 0)
    for start in range(0, len(s), 128):
        ss = s[start : start + 128, None]
        idx = np.minimum(stride[start : start + 128, None] * cols, span[start : start + 128, None])
        v = np.abs(g[idx + 2 * ss] - 2.0 * g[idx + ss] + g[idx])
        k = int(np.argmax(v))
        if v.flat[k] > best[0]:
            r = k // cfg.classical_x
            best = (float(v.flat[k]), start + r, int(idx[r, k % cfg.classical_x]))
    value, sh, i = best
    return ModulusResult(value, float(delta), sh * eta, i * eta, shifts + 1, min(cfg.classical_x, m + 1))


def kfunctional_bounds(f: FunctionSpec, t: float, cfg: GridConfig = GridConfig()) -> KInterval:
    """Two-sided bracket for K_phi^2(f, t^2).

    lower is omega/16; upper is the smaller of 10 omega and the g = f member
    of the infimum, t^2 ||phi^2 f''||. For affine f rounding can push omega/16
    above the exact zero of the second member, so lower is capped at upper.
    """
    if not 0.0 < t <= 1.0 / math.sqrt(2.0) + 1e-15:
        raise ValueError("t must lie in (0, 1/sqrt(2)]")
    f.require_order(2, "the K-functional bracket")
    w = dt_modulus2(f, t, cfg).value
    own = t * t * weighted_norm(f, 2, 2, cfg).value
    upper = min(K_UPPER * w, own)
    # both members bound K from its own side; a crossing is rounding in w
    return KInterval(t, min(K_LOWER * w, upper), upper)
