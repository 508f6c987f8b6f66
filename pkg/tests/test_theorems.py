import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from bernbound.funcmodel import DegenerateInputError, FunctionSpec, HypothesisError, builtin
from bernbound.theorems import (
    EXAMPLE3_LAMBDA0,
    ROUNDOFF_FLOOR,
    BoundReport,
    ThresholdNotFoundError,
    ThresholdResult,
    an_bracket,
    an_value,
    corollary1_check,
    corollary1_threshold,
    eq24_check,
    example_constants,
    example_thresholds,
    find_n0,
    find_n1,
    lambda_estimate,
    remark3_n2,
    sandwich_check,
    theorem3_check,
    theorem4_check,
    theoremE_check,
)

# 32/(27 pi^3), sin(1/2)/4 and the two Example 3 indices, evaluated with mpmath at 30 digits
LAMBDA0_SIN = 0.0382240408097179
SIN_HALF_QUARTER = 0.11985638465105075
N2_PRINTED = 535323356
N2_REDERIVED = 133830839


def dense_norm(f, p, k):
    x = np.linspace(0, 1, 400001)
    return float(np.max(np.abs((x * (1 - x)) ** (p / 2) * f.deriv(x, k))))


def test_sandwich_square():
    r = sandwich_check(builtin("x^2"), 100, 0.5)
    assert r.upper.left == pytest.approx(0.0025, rel=1e-9)
    assert r.upper.right == pytest.approx(3 * 0.005, rel=1e-9)
    assert r.ratio == pytest.approx(0.5, rel=1e-9)
    assert r.upper.holds and r.lower.holds
    assert r.lower.constant == 0.5 / 32
    assert r.upper.claim_id == "eq1.5-upper" and r.lower.claim_id == "eq1.5-lower"


def test_sandwich_affine():
    r = sandwich_check(FunctionSpec.from_expr("1 + 0.5*x"), 37, 0.5)
    assert r.upper.holds and r.lower.holds and r.ratio is None
    assert r.upper.left <= 1e-12 and r.upper.right <= 1e-12


def test_sandwich_arguments():
    with pytest.raises(ValueError):
        sandwich_check(builtin("exp"), 10, 1.0)
    with pytest.raises(HypothesisError):
        sandwich_check(FunctionSpec.from_expr("x^3", max_order=1), 10, 0.5)


def test_sandwich_exp_example():
    r = sandwich_check(builtin("exp"), 7567, 0.5)
    assert r.lower.holds and r.lower.constant == 1 / 64


def test_report_slack_is_directional():
    r = sandwich_check(builtin("exp"), 20, 0.5)
    up = r.upper
    assert up.holds == (up.left <= up.right * (1 + up.slack) + ROUNDOFF_FLOOR)
    lo = r.lower
    assert lo.holds == (lo.left >= lo.right * (1 - lo.slack) - ROUNDOFF_FLOOR)
    assert set(up.as_dict()) >= {"claim_id", "n", "left", "right", "constant", "holds", "slack", "provenance"}
    assert up.provenance["dt_modulus"]["grid_h"] == 513


def test_eq24():
    for f in (builtin("exp"), builtin("atan")):
        r = eq24_check(f, 30)
        assert r.holds and r.constant == 16


def test_lambda_estimate():
    for n in (1, 2, 9, 100):
        assert lambda_estimate(builtin("x^2"), n) == pytest.approx(1.0, abs=1e-3)
    for n in (2, 3, 50):
        assert lambda_estimate(builtin("sin"), n) >= LAMBDA0_SIN
    assert 0 < lambda_estimate(builtin("exp"), 100) <= 16
    with pytest.raises(DegenerateInputError):
        lambda_estimate(builtin("x"), 10)


def test_find_n0():
    assert find_n0(builtin("x^2"), 0.9, 200).n_value == 2
    r = find_n0(builtin("sin"), EXAMPLE3_LAMBDA0, 300)
    assert r.n_value == 2 and r.formula_id == "thm2-n0"
    with pytest.raises(ThresholdNotFoundError):
        find_n0(builtin("x^2"), 1.5, 100)
    with pytest.raises(DegenerateInputError):
        find_n0(builtin("x"), 0.5, 100)


def test_find_n0_geometric_thinning_reaches_n_max():
    r = find_n0(builtin("x^2"), 0.9, 5000, start=1500)
    assert r.n_value == 1500
    assert r.inputs["points_checked"] < 20


def test_an_value():
    assert an_value(builtin("x^2"), 37) == 0.0
    assert an_value(builtin("exp"), 400) < an_value(builtin("exp"), 100)
    with pytest.raises(DegenerateInputError):
        an_value(builtin("x"), 10)
    with pytest.raises(ValueError):
        an_value(builtin("exp"), 1)


def test_an_bracket():
    assert an_bracket(builtin("x^2"), 50, 0.5) == (0.0, 0.0)
    for f, lam in ((builtin("exp"), 0.5), (builtin("sin"), EXAMPLE3_LAMBDA0), (builtin("x^3"), 0.5)):
        lo, hi = an_bracket(f, 100, lam)
        a = an_value(f, 100)
        assert lo <= a <= hi
    lo, hi = an_bracket(builtin("x^3"), 100, 0.5)
    assert 0 < an_value(builtin("x^3"), 100) <= hi


def test_find_n1_square():
    r = find_n1(builtin("x^2"), 0.99, 0.5, 50)
    assert r.n_value == 2


def test_find_n1_not_found():
    with pytest.raises(ThresholdNotFoundError):
        find_n1(builtin("exp"), 0.5, 0.5, 200)


@pytest.mark.slow
def test_find_n1_sin_below_example_index():
    r = find_n1(builtin("sin"), 0.5, EXAMPLE3_LAMBDA0, 6 * 10**8)
    assert r.n_value <= N2_PRINTED
    assert r.n_value == r.inputs["an_condition_n"]


def test_corollary1_threshold():
    assert corollary1_threshold(1, 1).n_value == 1025
    assert corollary1_threshold(math.e, 1).n_value == 7567
    assert corollary1_threshold(1, math.cos(1)).n_value == 3508
    assert corollary1_threshold(0, 2).n_value == 1
    for bad in ((1, 0), (1, -1), (-1, 1), (math.inf, 1)):
        with pytest.raises(ValueError):
            corollary1_threshold(*bad)


@given(st.floats(0, 50), st.floats(0, 50), st.floats(0.01, 50), st.floats(0.01, 50))
def test_corollary1_threshold_monotone(M1, M2, m1, m2):
    lo_M, hi_M = sorted((M1, M2))
    lo_m, hi_m = sorted((m1, m2))
    assert corollary1_threshold(lo_M, lo_m).n_value <= corollary1_threshold(hi_M, lo_m).n_value
    assert corollary1_threshold(lo_M, hi_m).n_value <= corollary1_threshold(lo_M, lo_m).n_value


def test_corollary1_check():
    r = corollary1_check(builtin("exp"), 7567)
    assert r.holds and r.constant == 1 / 64
    assert r.provenance["threshold"] == 7567 and r.provenance["M_source"] == "estimated"
    r = corollary1_check(builtin("cos"), 3508, M=1.0, m=math.cos(1.0))
    assert r.holds and r.provenance["threshold"] == 3508 and r.provenance["M_source"] == "supplied"
    with pytest.raises(HypothesisError, match="inf"):
        corollary1_check(builtin("sin"), 10**4)
    with pytest.raises(HypothesisError, match="7567"):
        corollary1_check(builtin("exp"), 7566)
    assert corollary1_check(builtin("x"), 3).holds


def test_voronovskaja_checks_on_square():
    f = builtin("x^2")
    for check in (theorem3_check, theorem4_check, theoremE_check):
        r = check(f, 50)
        assert r.holds and r.left <= 1e-12


def test_theorem_e_cubic_closed_form():
    r = theoremE_check(builtin("x^3"), 12)
    assert r.left == pytest.approx(1 / (6 * math.sqrt(3)) / 144, rel=1e-9)
    assert r.right == pytest.approx(0.75 * 12**-1.5, rel=1e-9)
    assert r.holds


def test_theorem_preconditions():
    with pytest.raises(HypothesisError):
        theoremE_check(builtin("exp"), 11)
    with pytest.raises(HypothesisError):
        theoremE_check(FunctionSpec.from_expr("exp(x)", max_order=2), 20)
    with pytest.raises(HypothesisError):
        theorem4_check(builtin("exp"), 1)


def test_theorem3_prerequisite_flag():
    r = theorem3_check(builtin("exp"), 40)
    assert r.hypothesis_ok == (r.provenance["lambda_estimate"] >= 0.5)


def test_theorem4_exp_range():
    f = builtin("exp")
    assert all(theorem4_check(f, n).holds for n in range(2, 60))


def test_remark3_square():
    f = builtin("x^2")
    assert remark3_n2(f, 0.5, 0.5, "c4").n_value == 1
    assert remark3_n2(f, 0.5, 0.5, "w3phi").n_value == 1


def test_remark3_exp_closed_form():
    f = builtin("exp")
    r = remark3_n2(f, 0.5, 0.5, "w3phi")
    expected = math.floor((128 * dense_norm(f, 3, 3) / dense_norm(f, 2, 2)) ** 2) + 1
    assert abs(r.n_value - expected) <= max(2, 1e-6 * expected)


def test_remark3_sin_against_chain():
    c4 = remark3_n2(builtin("sin"), EXAMPLE3_LAMBDA0, 0.5, "c4").n_value
    chain = {t.formula_id: t.n_value for t in example_thresholds()}["ex3-sin-n2-chain"]
    # the chain replaces the norms by the cruder bounds 1, 1 and sin(1/2)/4
    assert 1 < c4 <= chain


def test_remark3_arguments():
    with pytest.raises(ValueError):
        remark3_n2(builtin("exp"), 0.5, 0.5, "c5")
    with pytest.raises(HypothesisError):
        remark3_n2(FunctionSpec.from_expr("exp(x)", max_order=3), 0.5, 0.5, "c4")
    with pytest.raises(DegenerateInputError):
        remark3_n2(builtin("x"), 0.5, 0.5, "w3phi")


def test_example_thresholds():
    got = {t.formula_id: t.n_value for t in example_thresholds()}
    assert got["ex1-exp"] == 7567
    assert got["ex2-cos-paper-printed"] == 1896
    assert got["ex2-cos-corollary-formula"] == 3508
    assert got["ex3-sin-n2-paper-printed"] == N2_PRINTED
    assert got["ex3-sin-n2-rederived"] == N2_REDERIVED
    assert example_thresholds()[3].inputs["lambda0"] == pytest.approx(LAMBDA0_SIN, rel=1e-15)


def test_example_constants():
    c = example_constants()
    assert c["4/27"] == pytest.approx(0.14814814814814814, rel=1e-15)
    assert c["max x*phi(x)^2 (grid)"] == pytest.approx(4 / 27, rel=1e-12)
    assert c["argmax x*phi(x)^2 (grid)"] == pytest.approx(2 / 3, abs=1e-6)
    assert c["sin(1/2)/4"] == pytest.approx(SIN_HALF_QUARTER, rel=1e-15)
    assert c["lambda0=32/(27*pi^3)"] == pytest.approx(LAMBDA0_SIN, rel=1e-15)
    assert c["1024*e^2"] == pytest.approx(7566.393445304986, rel=1e-15)


def test_threshold_result_positive():
    with pytest.raises(ValueError):
        ThresholdResult("x", {}, 0)


def test_bound_report_fields():
    r = BoundReport("c", 2, "upper", 1.0, 2.0, 3.0, True, 0.01)
    assert r.hypothesis_ok and r.provenance == {}
