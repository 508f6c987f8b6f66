"""Numerical checks of the direct and converse estimates for B_n.

Every sup that enters a check is a grid underestimate, so checks apply
directional slack: upper-type claims pass when ``left <= right * (1 + slack)``,
lower-type claims when ``left >= right * (1 - slack)``. Both comparisons also
allow ``ROUNDOFF_FLOOR`` absolute, since sides that vanish in exact arithmetic
(the residual of x^2, say) come out of the float evaluation near 1e-16.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bernstein import approx_error_norm, voronovskaja_residual_norm
from .funcmodel import DegenerateInputError, FunctionSpec, HypothesisError
from .numerics import GridConfig, grid_sup
from .smoothness import K_LOWER, classical_modulus, dt_modulus2, phi, weighted_norm

__all__ = [
    "DEFAULT_SLACK",
    "ROUNDOFF_FLOOR",
    "BoundReport",
    "SandwichResult",
    "ThresholdResult",
    "ThresholdNotFoundError",
    "sandwich_check",
    "eq24_check",
    "lambda_estimate",
    "find_n0",
    "an_value",
    "an_bracket",
    "find_n1",
    "corollary1_threshold",
    "corollary1_check",
    "theorem3_check",
    "theorem4_check",
    "theoremE_check",
    "remark3_n2",
    "example_constants",
    "example_thresholds",
    "EXAMPLE3_LAMBDA0",
]

DEFAULT_SLACK = 1e-2
ROUNDOFF_FLOOR = 1e-12
UPPER_SANDWICH = 3.0
VORONOVSKAJA_MODULUS = 4.0
COROLLARY_LOWER = 1.0 / 64.0
EXAMPLE3_LAMBDA0 = 32.0 / (27.0 * math.pi**3)
_LINEAR_SCAN_LIMIT = 1000
_GEOMETRIC_STEP = 2.0 ** (1.0 / 8.0)
_N_CEILING = 1 << 62


class ThresholdNotFoundError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class BoundReport:
    claim_id: str
    n: int
    kind: str
    left: float
    right: float
    constant: float
    holds: bool
    slack: float
    hypothesis_ok: bool = True
    note: str = ""
    provenance: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "claim_id": self.claim_id,
            "n": self.n,
            "kind": self.kind,
            "left": self.left,
            "right": self.right,
            "constant": self.constant,
            "holds": self.holds,
            "slack": self.slack,
            "hypothesis_ok": self.hypothesis_ok,
            "note": self.note,
            "provenance": self.provenance,
        }


@dataclass(frozen=True, eq=False)
class ThresholdResult:
    formula_id: str
    inputs: dict
    n_value: int
    note: str = ""

    def __post_init__(self):
        if self.n_value < 1:
            raise ValueError("threshold index must be positive")

    def as_dict(self) -> dict:
        return {"formula_id": self.formula_id, "inputs": self.inputs, "n_value": self.n_value, "note": self.note}


@dataclass(frozen=True, eq=False)
class SandwichResult:
    upper: BoundReport
    lower: BoundReport
    ratio: float | None


def _report(claim_id, n, kind, left, right, constant, slack, **extra) -> BoundReport:
    if kind == "upper":
        holds = left <= right * (1.0 + slack) + ROUNDOFF_FLOOR
    else:
        holds = left >= right * (1.0 - slack) - ROUNDOFF_FLOOR
    return BoundReport(claim_id, n, kind, float(left), float(right), float(constant), bool(holds), slack, **extra)


def _trivial(claim_id, n, kind, left, right, constant, slack, provenance) -> BoundReport:
    return BoundReport(
        claim_id, n, kind, float(left), float(right), float(constant), True, slack,
        note="affine function: both sides vanish", provenance=provenance,
    )


def _norm_meta(est) -> dict:
    return {"argmax": est.argmax, "grid_size": est.grid_size, "refinement_rounds": est.refinement_rounds}


def _mod_meta(res) -> dict:
    return {"delta": res.delta, "h_star": res.h_star, "x_star": res.x_star, "grid_h": res.grid_h, "grid_x": res.grid_x}


def _omega(f: FunctionSpec, n: int, cfg: GridConfig):
    return dt_modulus2(f, 1.0 / math.sqrt(n), cfg)


def _phi2_norm(f: FunctionSpec, cfg: GridConfig) -> float:
    return weighted_norm(f, 2, 2, cfg).value


def sandwich_check(
    f: FunctionSpec, n: int, mu0: float, cfg: GridConfig = GridConfig(), slack: float = DEFAULT_SLACK
) -> SandwichResult:
    """(mu0/32) w <= ||f - B_n f|| <= 3 w with w = omega_phi^2(f, 1/sqrt(n))."""
    if n < 1:
        raise ValueError("n must be positive")
    if not 0.0 < mu0 < 1.0:
        raise ValueError("mu0 must lie in (0, 1)")
    f.require_order(2, "the sandwich estimate")
    e = approx_error_norm(f, n, cfg)
    w = _omega(f, n, cfg)
    prov = {"err_norm": _norm_meta(e), "dt_modulus": _mod_meta(w)}
    lower_c = mu0 / 32.0
    if f.is_affine():
        up = _trivial("eq1.5-upper", n, "upper", e.value, UPPER_SANDWICH * w.value, UPPER_SANDWICH, slack, prov)
        lo = _trivial("eq1.5-lower", n, "lower", e.value, lower_c * w.value, lower_c, slack, prov)
        return SandwichResult(up, lo, None)
    up = _report("eq1.5-upper", n, "upper", e.value, UPPER_SANDWICH * w.value, UPPER_SANDWICH, slack, provenance=prov)
    lo = _report("eq1.5-lower", n, "lower", e.value, lower_c * w.value, lower_c, slack, provenance=prov)
    return SandwichResult(up, lo, e.value / w.value)


def eq24_check(f: FunctionSpec, n: int, cfg: GridConfig = GridConfig(), slack: float = DEFAULT_SLACK) -> BoundReport:
    """omega_phi^2(f, 1/sqrt(n)) <= 16 ||phi^2 f''|| / n."""
    f.require_order(2, "the modulus upper bound")
    w = _omega(f, n, cfg)
    norm = weighted_norm(f, 2, 2, cfg)
    c = 1.0 / K_LOWER
    prov = {"dt_modulus": _mod_meta(w), "phi2_f2_norm": _norm_meta(norm)}
    if f.is_affine():
        return _trivial("eq2.4", n, "upper", w.value, c * norm.value / n, c, slack, prov)
    return _report("eq2.4", n, "upper", w.value, c * norm.value / n, c, slack, provenance=prov)


def _require_curved(f: FunctionSpec, what: str) -> None:
    f.require_order(2, what)
    if f.is_affine():
        raise DegenerateInputError(f"{what} is undefined for the affine function {f.name}")


def lambda_estimate(f: FunctionSpec, n: int, cfg: GridConfig = GridConfig()) -> float:
    """n omega_phi^2(f, 1/sqrt(n)) / ||phi^2 f''||: the largest lambda valid at this n."""
    if n < 1:
        raise ValueError("n must be positive")
    _require_curved(f, "lambda_estimate")
    return n * _omega(f, n, cfg).value / _phi2_norm(f, cfg)


def _sampled_range(start: int, n_max: int) -> list[int]:
    """start..n_max, every integer up to 1000 and geometrically thinned above."""
    pts = list(range(start, min(n_max, _LINEAR_SCAN_LIMIT) + 1)) or [start]
    k = max(start, _LINEAR_SCAN_LIMIT)
    while k < n_max:
        k = max(k + 1, int(math.floor(k * _GEOMETRIC_STEP)))
        pts.append(min(k, n_max))
    return sorted(set(pts))


def find_n0(
    f: FunctionSpec, lambda0: float, n_max: int = 10**6, cfg: GridConfig = GridConfig(), start: int = 2
) -> ThresholdResult:
    """Smallest sampled n >= start with lambda_estimate(f, k) >= lambda0 for every sampled k in [n, n_max]."""
    if lambda0 <= 0.0:
        raise ValueError("lambda0 must be positive")
    if n_max < start:
        raise ValueError("n_max must be at least start")
    _require_curved(f, "find_n0")
    pts = _sampled_range(start, n_max)
    n0 = None
    lowest = math.inf
    for k in reversed(pts):
        lam = lambda_estimate(f, k, cfg)
        if lam < lambda0:
            break
        lowest = min(lowest, lam)
        n0 = k
    if n0 is None:
        raise ThresholdNotFoundError(
            f"lambda_estimate({f.name}, {n_max}) < {lambda0}: no n0 within n_max={n_max}"
        )
    inputs = {"lambda0": lambda0, "n_max": n_max, "start": start, "points_checked": len([p for p in pts if p >= n0]),
              "min_lambda_estimate": lowest}
    return ThresholdResult("thm2-n0", inputs, n0)


def _moduli_f2(f: FunctionSpec, n: int, cfg: GridConfig):
    d = 1.0 / math.sqrt(n)
    return classical_modulus(f, 2, 1, d, cfg), classical_modulus(f, 2, 2, d, cfg)


def _an_numerator(f: FunctionSpec, n: int, cfg: GridConfig) -> float:
    """(5/8) omega_1(f'', 1/sqrt(n)) + (13/64) omega_2(f'', 1/sqrt(n))."""
    w1, w2 = _moduli_f2(f, n, cfg)
    return 5.0 / 8.0 * w1.value + 13.0 / 64.0 * w2.value


def an_value(f: FunctionSpec, n: int, cfg: GridConfig = GridConfig()) -> float:
    if n < 2:
        raise ValueError("A_n is defined for n >= 2")
    _require_curved(f, "A_n")
    return _an_numerator(f, n, cfg) / (n * _omega(f, n, cfg).value)


def an_bracket(f: FunctionSpec, n: int, lambda0: float, cfg: GridConfig = GridConfig()) -> tuple[float, float]:
    """(lower, upper) bounds of A_n from the modulus cap and the lambda0 floor.

    The upper member is valid once lambda_estimate(f, k) >= lambda0 for k >= n.
    """
    if n < 2:
        raise ValueError("A_n is defined for n >= 2")
    if lambda0 <= 0.0:
        raise ValueError("lambda0 must be positive")
    _require_curved(f, "the A_n bracket")
    num = _an_numerator(f, n, cfg)
    norm = _phi2_norm(f, cfg)
    return K_LOWER * num / norm, num / (lambda0 * norm)


def find_n1(
    f: FunctionSpec, mu0: float, lambda0: float, n_max: int = 10**6, cfg: GridConfig = GridConfig()
) -> ThresholdResult:
    """Smallest n certifying ||f - B_n f|| >= (mu0/32) omega_phi^2(f, 1/sqrt(n)).

    Searches the first n with 1/32 - upper(A_n) >= mu0/32 (upper(A_n) is
    nonincreasing in n), then moves up to the first n from which the lambda0
    floor behind that upper member holds through n_max.
    """
    if not 0.0 < mu0 < 1.0:
        raise ValueError("mu0 must lie in (0, 1)")
    _require_curved(f, "find_n1")
    target = (1.0 - mu0) / 32.0

    def ok(n):
        return an_bracket(f, n, lambda0, cfg)[1] <= target

    lo, hi = 1, 2
    while not ok(hi):
        if hi >= n_max:
            raise ThresholdNotFoundError(f"A_n upper bound stays above {target:.6g} up to n_max={n_max}")
        lo, hi = hi, min(2 * hi, n_max)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    n0 = find_n0(f, lambda0, n_max, cfg, start=hi)
    inputs = {
        "mu0": mu0,
        "lambda0": lambda0,
        "n_max": n_max,
        "an_condition_n": hi,
        "an_upper_at_n": an_bracket(f, max(hi, n0.n_value), lambda0, cfg)[1],
        "target": target,
        "n0": n0.n_value,
    }
    return ThresholdResult("thm1-n1", inputs, max(hi, n0.n_value))


def corollary1_threshold(M: float, m: float) -> ThresholdResult:
    """n1 = [1024 M^2 / m^2] + 1."""
    if M < 0.0 or m <= 0.0 or not (math.isfinite(M) and math.isfinite(m)):
        raise ValueError("need M >= 0 and m > 0")
    return ThresholdResult("cor1-n1", {"M": M, "m": m}, math.floor(1024.0 * M * M / (m * m)) + 1)


def _inf_abs_f2(f: FunctionSpec, cfg: GridConfig) -> float:
    est = grid_sup(
        lambda x: -np.abs(f.deriv(x, 2)),
        points=cfg.grid_points,
        rounds=cfg.refine_rounds,
        golden_iters=cfg.golden_iters,
        max_candidates=cfg.max_candidates,
    )
    return -est.value


def corollary1_constants(f: FunctionSpec, cfg: GridConfig = GridConfig()) -> tuple[float, float]:
    """(M, m) = (sup |f'''|, inf |f''|) estimated on the norm grid."""
    f.require_order(3, "Corollary 1")
    return weighted_norm(f, 0, 3, cfg).value, _inf_abs_f2(f, cfg)


def corollary1_check(
    f: FunctionSpec,
    n: int,
    cfg: GridConfig = GridConfig(),
    M: float | None = None,
    m: float | None = None,
    slack: float = DEFAULT_SLACK,
) -> BoundReport:
    """||f - B_n f|| >= omega_phi^2(f, 1/sqrt(n)) / 64 for n past the Corollary 1 index.

    Explicit ``M``/``m`` win over the grid estimates.
    """
    f.require_order(3, "Corollary 1")
    if f.is_affine():
        e = approx_error_norm(f, n, cfg)
        w = _omega(f, n, cfg)
        prov = {"err_norm": _norm_meta(e), "dt_modulus": _mod_meta(w)}
        return _trivial("cor1", n, "lower", e.value, COROLLARY_LOWER * w.value, COROLLARY_LOWER, slack, prov)
    M_est, m_est = (None, None)
    if M is None or m is None:
        M_est, m_est = corollary1_constants(f, cfg)
    M_used = M if M is not None else M_est
    m_used = m if m is not None else m_est
    if m_used <= 1e-12:
        raise HypothesisError(f"Corollary 1 needs |f''| >= m > 0 on [0, 1]; inf |f''| of {f.name} is {m_used:.3g}")
    thr = corollary1_threshold(M_used, m_used)
    if n < thr.n_value:
        raise HypothesisError(f"Corollary 1 applies for n >= {thr.n_value}; got n = {n}")
    e = approx_error_norm(f, n, cfg)
    w = _omega(f, n, cfg)
    prov = {
        "M": M_used,
        "m": m_used,
        "M_source": "supplied" if M is not None else "estimated",
        "m_source": "supplied" if m is not None else "estimated",
        "threshold": thr.n_value,
        "err_norm": _norm_meta(e),
        "dt_modulus": _mod_meta(w),
    }
    return _report("cor1", n, "lower", e.value, COROLLARY_LOWER * w.value, COROLLARY_LOWER, slack, provenance=prov)


def theorem3_check(f: FunctionSpec, n: int, cfg: GridConfig = GridConfig(), slack: float = DEFAULT_SLACK) -> BoundReport:
    """Voronovskaja residual <= 4 omega_phi^2(f, 1/sqrt(n)).

    The bound needs ||phi^2 f''|| / (2n) <= omega_phi^2(f, 1/sqrt(n)), i.e.
    lambda_estimate >= 1/2; below that the report is marked hypothesis_ok=False.
    """
    f.require_order(2, "the Voronovskaja estimate")
    r = voronovskaja_residual_norm(f, n, cfg)
    w = _omega(f, n, cfg)
    prov = {"residual_norm": _norm_meta(r), "dt_modulus": _mod_meta(w)}
    right = VORONOVSKAJA_MODULUS * w.value
    if f.is_affine():
        return _trivial("eq2.8", n, "upper", r.value, right, VORONOVSKAJA_MODULUS, slack, prov)
    lam = lambda_estimate(f, n, cfg)
    prov["lambda_estimate"] = lam
    ok = lam >= 0.5
    note = "" if ok else "lambda_estimate < 1/2: n below the n0 of this estimate, report only"
    return _report("eq2.8", n, "upper", r.value, right, VORONOVSKAJA_MODULUS, slack, hypothesis_ok=ok, note=note,
                   provenance=prov)


def theorem4_check(f: FunctionSpec, n: int, cfg: GridConfig = GridConfig(), slack: float = DEFAULT_SLACK) -> BoundReport:
    """Voronovskaja residual <= 5/(8n) omega_1(f'', 1/sqrt(n)) + 13/(64n) omega_2(f'', 1/sqrt(n))."""
    if n < 2:
        raise HypothesisError("the classical-moduli Voronovskaja bound needs n >= 2")
    f.require_order(2, "the Voronovskaja estimate")
    r = voronovskaja_residual_norm(f, n, cfg)
    w1, w2 = _moduli_f2(f, n, cfg)
    right = 5.0 / (8 * n) * w1.value + 13.0 / (64 * n) * w2.value
    prov = {"residual_norm": _norm_meta(r), "omega1_f2": _mod_meta(w1), "omega2_f2": _mod_meta(w2)}
    if f.is_affine():
        return _trivial("eq2.9", n, "upper", r.value, right, 5.0 / 8.0, slack, prov)
    return _report("eq2.9", n, "upper", r.value, right, 5.0 / 8.0, slack, provenance=prov)


def theoremE_check(f: FunctionSpec, n: int, cfg: GridConfig = GridConfig(), slack: float = DEFAULT_SLACK) -> BoundReport:
    """Voronovskaja residual <= n^(-3/2) ||phi^3 f'''|| for n >= 12."""
    if n < 12:
        raise HypothesisError("the phi^3 f''' Voronovskaja bound needs n >= 12")
    f.require_order(3, "the phi^3 f''' Voronovskaja bound")
    r = voronovskaja_residual_norm(f, n, cfg)
    norm = weighted_norm(f, 3, 3, cfg)
    right = n**-1.5 * norm.value
    prov = {"residual_norm": _norm_meta(r), "phi3_f3_norm": _norm_meta(norm)}
    if f.is_affine():
        return _trivial("eq2.7", n, "upper", r.value, right, 1.0, slack, prov)
    return _report("eq2.7", n, "upper", r.value, right, 1.0, slack, provenance=prov)


def _first_n(pred) -> int:
    """Smallest n >= 1 with pred(n), for pred monotone false -> true."""
    if pred(1):
        return 1
    lo, hi = 1, 2
    while not pred(hi):
        lo, hi = hi, 2 * hi
        if hi > _N_CEILING:
            raise ThresholdNotFoundError("no finite index satisfies the condition")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return hi


def remark3_n2(
    f: FunctionSpec, lambda0: float, mu0: float, variant: str = "c4", cfg: GridConfig = GridConfig()
) -> ThresholdResult:
    """Smallest index from which the lower-estimate condition on A_n can hold.

    ``c4`` bounds the classical moduli of f'' by ||f'''|| and ||f''''|| and
    bisects; ``w3phi`` uses the closed form
    [(32 ||phi^3 f'''|| / (lambda0 (1 - mu0) ||phi^2 f''||))^2] + 1.
    These evaluate norms only, so they are not limited by n_max.
    """
    if lambda0 <= 0.0 or not 0.0 < mu0 < 1.0:
        raise ValueError("need lambda0 > 0 and mu0 in (0, 1)")
    _require_curved(f, "Remark 3")
    norm2 = _phi2_norm(f, cfg)
    target = lambda0 * norm2 * (1.0 - mu0) / 32.0
    if variant == "c4":
        f.require_order(4, "the C^4 variant of n2")
        a3 = weighted_norm(f, 0, 3, cfg).value
        a4 = weighted_norm(f, 0, 4, cfg).value
        n2 = _first_n(lambda n: 5.0 / (8.0 * math.sqrt(n)) * a3 + 13.0 / (64.0 * n) * a4 <= target)
        inputs = {"lambda0": lambda0, "mu0": mu0, "f3_norm": a3, "f4_norm": a4, "phi2_f2_norm": norm2}
        return ThresholdResult("rem3-n2-c4", inputs, n2)
    if variant == "w3phi":
        f.require_order(3, "the W^3(phi) variant of n2")
        n3 = weighted_norm(f, 3, 3, cfg).value
        ratio = 32.0 * n3 / (lambda0 * (1.0 - mu0) * norm2)
        inputs = {"lambda0": lambda0, "mu0": mu0, "phi3_f3_norm": n3, "phi2_f2_norm": norm2}
        return ThresholdResult("rem3-n2-w3phi", inputs, math.floor(ratio * ratio) + 1)
    raise ValueError(f"unknown variant {variant!r}; use 'c4' or 'w3phi'")


def example_constants(cfg: GridConfig = GridConfig()) -> dict[str, float]:
    """Named constants behind the worked examples for exp, cos and sin."""
    # x phi(x)^2 = x^2 (1 - x) peaks at 2/3 with value 4/27
    peak = grid_sup(lambda x: x * phi(x) ** 2, points=cfg.grid_points, rounds=cfg.refine_rounds)
    return {
        "1024*e^2": 1024.0 * math.e**2,
        "cos(1)": math.cos(1.0),
        "lambda0=32/(27*pi^3)": EXAMPLE3_LAMBDA0,
        "4/27": 4.0 / 27.0,
        "max x*phi(x)^2 (grid)": peak.value,
        "argmax x*phi(x)^2 (grid)": peak.argmax,
        "sin(1/2)": math.sin(0.5),
        "sin(1/2)/4": math.sin(0.5) / 4.0,
        "8/pi^3": 8.0 / math.pi**3,
    }


def _example3_n2(c: float, lambda0: float, mu0: float) -> int:
    r = c / (lambda0 * (1.0 - mu0) * math.sin(0.5))
    return math.floor(r * r) + 1


def example_thresholds(lambda0: float = EXAMPLE3_LAMBDA0, mu0: float = 0.5) -> list[ThresholdResult]:
    """Explicit threshold indices of the exp, cos and sin examples.

    For cos both the printed [1024/cos(1)] + 1 and the Corollary 1 value
    [1024/cos(1)^2] + 1 are returned. For sin the printed constant 212 and the
    constant 106 = 128 (5/8 + 13/64) from redoing the last simplification are
    both returned, together with the index read off the unsimplified chain.
    """
    e2 = 1024.0 * math.e**2
    c1 = math.cos(1.0)
    s = math.sin(0.5)

    def chain(n):
        return 4.0 / (lambda0 * s) * (5.0 / (8.0 * math.sqrt(n)) + 13.0 / (64.0 * n)) <= (1.0 - mu0) / 32.0

    common = {"lambda0": lambda0, "mu0": mu0, "sin(1/2)": s}
    return [
        ThresholdResult("ex1-exp", {"1024*e^2": e2, "M": math.e, "m": 1.0}, math.floor(e2) + 1,
                        "smallest integer n > 1024 e^2"),
        ThresholdResult("ex2-cos-paper-printed", {"cos(1)": c1, "M": 1.0, "m": c1}, math.floor(1024.0 / c1) + 1,
                        "printed index [1024/cos(1)] + 1"),
        ThresholdResult("ex2-cos-corollary-formula", {"cos(1)": c1, "M": 1.0, "m": c1},
                        corollary1_threshold(1.0, c1).n_value,
                        "Corollary 1 index [1024 M^2/m^2] + 1 with M = 1, m = cos(1); differs from the printed value"),
        ThresholdResult("ex3-sin-n2-paper-printed", {**common, "constant": 212.0}, _example3_n2(212.0, lambda0, mu0),
                        "[(212/(lambda0 (1 - mu0) sin(1/2)))^2] + 1"),
        ThresholdResult("ex3-sin-n2-rederived", {**common, "constant": 106.0}, _example3_n2(106.0, lambda0, mu0),
                        "same formula with 128 (5/8 + 13/64) = 106"),
        ThresholdResult("ex3-sin-n2-chain", common, _first_n(chain),
                        "smallest n with 4/(lambda0 sin(1/2)) [5/(8 sqrt n) + 13/(64 n)] <= (1 - mu0)/32"),
    ]
