"""Functions on [0, 1] given by expression text."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .jet import MAX_ORDER, DomainError, Jet, eval_jet, evaluate
from .parser import ExprNode, parse, render

__all__ = [
    "DomainError",
    "HypothesisError",
    "DegenerateInputError",
    "FunctionSpec",
    "PROBE_POINTS",
    "probe_grid",
    "builtin_corpus",
    "builtin",
    "as_function",
]

PROBE_POINTS = 257


class HypothesisError(ValueError):
    """The function does not satisfy a hypothesis of the estimate being checked."""


class DegenerateInputError(HypothesisError):
    """The estimate is undefined for this input (typically an affine function)."""


def probe_grid() -> np.ndarray:
    return np.linspace(0.0, 1.0, PROBE_POINTS)


@dataclass(frozen=True)
class FunctionSpec:
    """A named expression with derivatives guaranteed finite up to ``max_order``.

    Construction evaluates the jet on the probe grid and raises
    :class:`~bernbound.jet.DomainError` if anything is non-finite there.
    """

    name: str
    body: ExprNode = field(compare=True)
    max_order: int = MAX_ORDER

    def __post_init__(self):
        if not 0 <= self.max_order <= MAX_ORDER:
            raise ValueError(f"max_order must be in 0..{MAX_ORDER}")
        eval_jet(self.body, probe_grid(), self.max_order)

    @classmethod
    def from_expr(cls, src: str, name: str | None = None, max_order: int = MAX_ORDER) -> FunctionSpec:
        return cls(name or src, parse(src), max_order)

    @property
    def expr(self) -> str:
        return render(self.body)

    def __call__(self, x) -> np.ndarray:
        return evaluate(self.body, x)

    def deriv(self, x, k: int) -> np.ndarray:
        if k > self.max_order:
            raise ValueError(f"{self.name}: derivative {k} exceeds max_order {self.max_order}")
        return evaluate(self.body, x, k)

    def jet(self, x, order: int | None = None) -> Jet:
        return eval_jet(self.body, x, self.max_order if order is None else order)

    def require_order(self, k: int, what: str = "this estimate") -> None:
        if self.max_order < k:
            raise HypothesisError(f"{what} needs {k} derivatives; {self.name} has max_order {self.max_order}")

    def is_affine(self) -> bool:
        """True when f'' vanishes on the probe grid (degree <= 1)."""
        self.require_order(2, "the affinity test")
        return bool(np.max(np.abs(self.deriv(probe_grid(), 2))) <= 1e-12)


_CORPUS = (
    ("x", "x"),
    ("x^2", "x^2"),
    ("x^3", "x^3"),
    ("exp", "exp(x)"),
    ("sin", "sin(x)"),
    ("cos", "cos(x)"),
    ("atan", "atan(x)"),
    ("rational", "1/(1+x^2)"),
)


def builtin_corpus() -> list[FunctionSpec]:
    return [FunctionSpec.from_expr(src, name=name) for name, src in _CORPUS]


def builtin(name: str) -> FunctionSpec:
    for n, src in _CORPUS:
        if n == name:
            return FunctionSpec.from_expr(src, name=n)
    raise KeyError(f"no builtin function {name!r}; choose from {', '.join(n for n, _ in _CORPUS)}")


def as_function(f: FunctionSpec | str) -> FunctionSpec:
    return f if isinstance(f, FunctionSpec) else FunctionSpec.from_expr(f)

