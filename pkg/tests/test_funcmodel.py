import math

import numpy as np
import pytest

from bernbound.funcmodel import (
    PROBE_POINTS,
    DomainError,
    FunctionSpec,
    HypothesisError,
    as_function,
    builtin,
    builtin_corpus,
    probe_grid,
)


def test_corpus_members():
    names = {f.name for f in builtin_corpus()}
    assert {"x", "x^2", "x^3", "exp", "sin", "cos", "atan", "rational"} <= names
    assert all(f.max_order == 4 for f in builtin_corpus())


def test_builtin_lookup():
    assert builtin("exp").expr == "exp(x)"
    with pytest.raises(KeyError):
        builtin("gamma")


def test_probe_grid():
    g = probe_grid()
    assert len(g) == PROBE_POINTS == 257
    assert g[0] == 0.0 and g[-1] == 1.0


def test_construction_rejects_inadmissible():
    with pytest.raises(DomainError):
        FunctionSpec.from_expr("log(x)")
    with pytest.raises(DomainError):
        FunctionSpec.from_expr("sqrt(x)")  # derivative blows up at 0
    assert FunctionSpec.from_expr("sqrt(x)", max_order=0)(np.array([0.25]))[0] == 0.5


def test_max_order_range():
    with pytest.raises(ValueError):
        FunctionSpec.from_expr("x", max_order=5)


def test_specs_are_value_objects():
    a, b = FunctionSpec.from_expr("exp(x)", name="e"), FunctionSpec.from_expr("exp(x)", name="e")
    assert a == b and hash(a) == hash(b)


def test_deriv_respects_max_order():
    f = FunctionSpec.from_expr("x^3", max_order=2)
    with pytest.raises(ValueError):
        f.deriv(np.array([0.5]), 3)
    with pytest.raises(HypothesisError):
        f.require_order(3)


def test_affine_detection():
    assert builtin("x").is_affine()
    assert FunctionSpec.from_expr("1 + 0.5*x").is_affine()
    assert not builtin("x^2").is_affine()


def test_call_and_jet():
    f = builtin("sin")
    assert f(np.array([0.5]))[0] == pytest.approx(math.sin(0.5))
    assert f.jet(0.5, 2)[2] == pytest.approx(-math.sin(0.5))


def test_as_function():
    assert as_function("x^2").expr == "x^2"
    f = builtin("cos")
    assert as_function(f) is f
