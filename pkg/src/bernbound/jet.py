"""Truncated Taylor jets (value plus derivatives up to order 4).

Every component of a :class:`Jet` is either a float or a numpy array, so the
same arithmetic differentiates at one point or at a whole grid at once.
"""

from __future__ import annotations

import math

import numpy as np

from .parser import ExprNode, render

__all__ = ["MAX_ORDER", "Jet", "DomainError", "eval_jet", "evaluate"]

MAX_ORDER = 4


class DomainError(ArithmeticError):
    """A node produced a non-finite value (log of a non-positive number, ...)."""

    def __init__(self, node: ExprNode, detail: str = "non-finite value"):
        super().__init__(f"{detail} in {render(node)}")
        self.node = node


class Jet:
    """Derivatives ``d[0..order]`` of some function at the evaluation point(s)."""

    __slots__ = ("d",)

    def __init__(self, d):
        self.d = tuple(d)

    @property
    def order(self) -> int:
        return len(self.d) - 1

    @classmethod
    def constant(cls, c: float, order: int) -> Jet:
        return cls((c,) + (0.0,) * order)

    @classmethod
    def variable(cls, x, order: int) -> Jet:
        d = [x, 1.0, 0.0, 0.0, 0.0]
        return cls(d[: order + 1])

    def __getitem__(self, k):
        return self.d[k]

    def __len__(self):
        return len(self.d)

    def __iter__(self):
        return iter(self.d)

    def __repr__(self):
        return f"Jet{self.d!r}"

    def __neg__(self):
        return Jet(-a for a in self.d)

    def __add__(self, other: Jet):
        return Jet(a + b for a, b in zip(self.d, other.d))

    def __sub__(self, other: Jet):
        return Jet(a - b for a, b in zip(self.d, other.d))

    def __mul__(self, other: Jet):
        # Leibniz rule
        f, g = self.d, other.d
        return Jet(
            sum(math.comb(k, j) * f[j] * g[k - j] for j in range(k + 1))
            for k in range(len(f))
        )

    def __truediv__(self, other: Jet):
        f, g = self.d, other.d
        h = []
        for k in range(len(f)):
            acc = f[k]
            for j in range(1, k + 1):
                acc = acc - math.comb(k, j) * g[j] * h[k - j]
            h.append(acc / g[0])
        return Jet(h)

    def compose(self, outer) -> Jet:
        """Chain rule up to fourth order.

        ``outer`` holds the outer function's derivatives ``(F, F', F'', F''', F'''')``
        evaluated at ``self.d[0]``; entries beyond ``self.order`` are ignored.
        """
        u = self.d
        n = self.order
        out = [outer[0]]
        if n >= 1:
            out.append(outer[1] * u[1])
        if n >= 2:
            out.append(outer[2] * u[1] ** 2 + outer[1] * u[2])
        if n >= 3:
            out.append(outer[3] * u[1] ** 3 + 3 * outer[2] * u[1] * u[2] + outer[1] * u[3])
        if n >= 4:
            out.append(
                outer[4] * u[1] ** 4
                + 6 * outer[3] * u[1] ** 2 * u[2]
                + outer[2] * (3 * u[2] ** 2 + 4 * u[1] * u[3])
                + outer[1] * u[4]
            )
        return Jet(out)


# Outer-derivative tables; each returns (F, F', ..., F^(order)) at u.

def _d_exp(u, order):
    e = np.exp(u)
    return (e,) * (order + 1)


def _d_log(u, order):
    r = 1.0 / u
    return (np.log(u), r, -(r**2), 2 * r**3, -6 * r**4)[: order + 1]


def _d_sin(u, order):
    s, c = np.sin(u), np.cos(u)
    return (s, c, -s, -c, s)[: order + 1]


def _d_cos(u, order):
    s, c = np.sin(u), np.cos(u)
    return (c, -s, -c, s, c)[: order + 1]


def _d_tan(u, order):
    t = np.tan(u)
    s = 1 + t * t
    return (t, s, 2 * t * s, 2 * s * (1 + 3 * t * t), 8 * t * s * (2 + 3 * t * t))[: order + 1]


def _d_atan(u, order):
    r = 1.0 / (1 + u * u)
    return (np.arctan(u), r, -2 * u * r**2, (6 * u * u - 2) * r**3, 24 * u * (1 - u * u) * r**4)[: order + 1]


def _d_sqrt(u, order):
    s = np.sqrt(u)
    if order == 0:
        return (s,)
    r = 1.0 / u
    return (s, 0.5 * s * r, -0.25 * s * r**2, 0.375 * s * r**3, -0.9375 * s * r**4)[: order + 1]


_VALUE = {
    "exp": np.exp,
    "log": np.log,
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "atan": np.arctan,
    "sqrt": np.sqrt,
}

_OUTER = {
    "exp": _d_exp,
    "log": _d_log,
    "sin": _d_sin,
    "cos": _d_cos,
    "tan": _d_tan,
    "atan": _d_atan,
    "sqrt": _d_sqrt,
}


def _d_power(u, p: float, order: int):
    """Derivatives of ``u -> u**p`` for a constant exponent ``p``."""
    out = []
    coeff = 1.0
    for j in range(order + 1):
        if coeff == 0.0:
            # falling factorial vanished (integer p < j); avoids 0 * inf at u == 0
            out.append(0.0 * u)
        else:
            out.append(coeff * np.power(u, p - j))
        coeff *= p - j
    return out


def _is_integer(p: float) -> bool:
    return float(p).is_integer()


def _check(node: ExprNode, jet: Jet) -> Jet:
    for a in jet.d:
        if not np.all(np.isfinite(a)):
            raise DomainError(node)
    return jet


def _eval(node: ExprNode, x, order: int) -> Jet:
    if node.kind == "const":
        return Jet.constant(node.payload, order)
    if node.kind == "var":
        return Jet.variable(x, order)
    if node.kind == "unary":
        u = _eval(node.children[0], x, order)
        if node.payload == "neg":
            return -u
        if node.payload == "log" and np.any(np.asarray(u[0]) <= 0):
            raise DomainError(node, "log of a non-positive argument")
        if node.payload == "sqrt" and np.any(np.asarray(u[0]) < 0):
            raise DomainError(node, "sqrt of a negative argument")
        if order == 0:
            return _check(node, Jet((_VALUE[node.payload](u[0]),)))
        return _check(node, u.compose(_OUTER[node.payload](u[0], order)))
    a = _eval(node.children[0], x, order)
    op = node.payload
    if op == "pow":
        expo = node.children[1]
        if not expo.depends_on_x():
            p = _eval(expo, x, 0)[0]
            if not _is_integer(p) and np.any(np.asarray(a[0]) <= 0):
                raise DomainError(node, "non-integer power of a non-positive base")
            return _check(node, a.compose(_d_power(a[0], p, order)))
        if np.any(np.asarray(a[0]) <= 0):
            raise DomainError(node, "variable power of a non-positive base")
        b = _eval(expo, x, order)
        log_a = a.compose(_d_log(a[0], order))
        return _check(node, (b * log_a).compose(_d_exp((b * log_a)[0], order)))
    b = _eval(node.children[1], x, order)
    if op == "add":
        return _check(node, a + b)
    if op == "sub":
        return _check(node, a - b)
    if op == "mul":
        return _check(node, a * b)
    if op == "div":
        if np.any(np.asarray(b[0]) == 0):
            raise DomainError(node, "division by zero")
        return _check(node, a / b)
    raise AssertionError(op)


def eval_jet(body: ExprNode, x, order: int = MAX_ORDER) -> Jet:
    """Value and derivatives ``0..order`` of ``body`` at ``x`` (scalar or array)."""
    if not 0 <= order <= MAX_ORDER:
        raise ValueError(f"order must be in 0..{MAX_ORDER}, got {order}")
    scalar = np.ndim(x) == 0
    xa = float(x) if scalar else np.asarray(x, dtype=float)
    with np.errstate(all="ignore"):
        jet = _check(body, _eval(body, xa, order))
    if scalar:
        return Jet(float(a) for a in jet.d)
    return Jet(_full(a, xa.shape) for a in jet.d)


def _full(a, shape):
    a = np.asarray(a, dtype=float)
    return a if a.shape == shape else np.broadcast_to(a, shape)


def evaluate(body: ExprNode, x, deriv: int = 0) -> np.ndarray:
    """``deriv``-th derivative of ``body`` on the array ``x``."""
    xa = np.asarray(x, dtype=float)
    out = eval_jet(body, xa, deriv)[deriv]
    if xa.ndim == 0:
        return np.asarray(out)
    # constants come back as read-only broadcast views and x itself as x
    return out.copy() if out is xa or not out.flags.writeable else out
