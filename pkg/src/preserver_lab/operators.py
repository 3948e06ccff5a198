"""Finite-order differential operators with polynomial coefficients, the
constant-coefficient specialisation, and diagonal (multiplier) sequences.

Infinite-order operators only appear through :class:`Generator` objects that
the caller truncates to an explicit degree.
"""

from __future__ import annotations

import ast
import math
import operator
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .polycore import RatLike, RatPoly, derivative, poly_from_json, poly_to_json, rat_str, to_rat

__all__ = [
    "DiffOperator",
    "ConstCoeffOperator",
    "DiagSequence",
    "Generator",
    "apply_diff",
    "apply_diag",
    "invert_diag",
    "truncate",
    "operator_from_json",
    "operator_to_json",
    "OperatorError",
]


class OperatorError(ValueError):
    pass


@dataclass(frozen=True)
class DiffOperator:
    """``sum_i q[i](x) * d^i/dx^i``."""

    q: tuple[RatPoly, ...]

    def __init__(self, q: Sequence[RatPoly | RatLike]):
        coeffs = tuple(c if isinstance(c, RatPoly) else RatPoly([c]) for c in q)
        if not coeffs:
            raise OperatorError("a differential operator needs at least one coefficient")
        object.__setattr__(self, "q", coeffs)

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.q)

    @property
    def order(self) -> int:
        """Highest ``i`` with ``q_i != 0``; ``-1`` for the zero operator."""
        for i in range(len(self.q) - 1, -1, -1):
            if not self.q[i].is_zero:
                return i
        return -1

    def coeff(self, i: int) -> RatPoly:
        return self.q[i] if 0 <= i < len(self.q) else RatPoly()

    def is_constant_coeff(self) -> bool:
        return all(c.is_constant() for c in self.q)

    def restrict(self, order: int) -> "DiffOperator":
        """Drop the terms of order above ``order`` (action on degree <= order)."""
        return DiffOperator(self.q[: order + 1])

    def __call__(self, p: RatPoly) -> RatPoly:
        return apply_diff(self, p)

    def __str__(self) -> str:
        parts = []
        for i, c in enumerate(self.q):
            if c.is_zero:
                continue
            d = "" if i == 0 else ("D" if i == 1 else f"D^{i}")
            parts.append(f"({c}){d}" if d else f"({c})")
        return " + ".join(parts) or "0"


@dataclass(frozen=True)
class ConstCoeffOperator:
    """``sum_i alpha[i] * d^i/dx^i`` with rational constants."""

    alpha: tuple[Fraction, ...]

    def __init__(self, alpha: Sequence[RatLike]):
        vals = tuple(to_rat(a) for a in alpha)
        if not vals:
            raise OperatorError("empty coefficient list")
        object.__setattr__(self, "alpha", vals)

    @property
    def order(self) -> int:
        for i in range(len(self.alpha) - 1, -1, -1):
            if self.alpha[i] != 0:
                return i
        return -1

    def coeff(self, i: int) -> Fraction:
        return self.alpha[i] if 0 <= i < len(self.alpha) else Fraction(0)

    def as_diff(self) -> DiffOperator:
        return DiffOperator([RatPoly([a]) for a in self.alpha])

    def __call__(self, p: RatPoly) -> RatPoly:
        return apply_diff(self.as_diff(), p)


@dataclass(frozen=True)
class DiagSequence:
    """``x^i -> lambdas[i] * x^i`` on polynomials of degree ``<= len - 1``."""

    lambdas: tuple[Fraction, ...]

    def __init__(self, lambdas: Sequence[RatLike]):
        vals = tuple(to_rat(v) for v in lambdas)
        if not vals:
            raise OperatorError("a diagonal sequence needs at least lambda_0")
        object.__setattr__(self, "lambdas", vals)

    @property
    def degree(self) -> int:
        return len(self.lambdas) - 1

    def __call__(self, p: RatPoly) -> RatPoly:
        return apply_diag(self, p)


def apply_diff(U: DiffOperator | ConstCoeffOperator, p: RatPoly) -> RatPoly:
    if isinstance(U, ConstCoeffOperator):
        U = U.as_diff()
    out = RatPoly()
    for i, q in enumerate(U.q):
        if q.is_zero or i > len(p.coeffs) - 1:
            continue
        out = out + q * derivative(p, i)
    return out


def apply_diag(T: DiagSequence, p: RatPoly) -> RatPoly:
    if p.degree > T.degree:
        raise OperatorError(f"degree {p.degree} exceeds the truncation degree {T.degree}")
    return RatPoly(lam * a for lam, a in zip(T.lambdas, p.coeffs))


def invert_diag(T: DiagSequence) -> DiagSequence:
    if any(lam == 0 for lam in T.lambdas):
        raise OperatorError("a diagonal sequence with a zero entry is not invertible")
    return DiagSequence([1 / lam for lam in T.lambdas])


# --------------------------------------------------------------------------
# closed-form generators


_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}


def _factorial(n: Fraction) -> Fraction:
    if n.denominator != 1 or n < 0:
        raise OperatorError("factorial needs a non-negative integer")
    return Fraction(math.factorial(int(n)))


def _binomial(n: Fraction, k: Fraction) -> Fraction:
    if n.denominator != 1 or k.denominator != 1:
        raise OperatorError("binomial needs integers")
    return Fraction(math.comb(int(n), int(k)))


_FUNCS = {"factorial": _factorial, "binomial": _binomial}


def compile_formula(text: str) -> Callable[[int], Fraction]:
    """Compile an arithmetic formula in the index ``i`` to an exact rule.

    Supports ``+ - * /``, integer powers (``^`` or ``**``), integer literals,
    and the functions ``factorial`` and ``binomial``.
    """
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise OperatorError(f"bad formula {text!r}: {exc.msg}") from None

    def ev(node, i: Fraction) -> Fraction:
        if isinstance(node, ast.Expression):
            return ev(node.body, i)
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return Fraction(node.value)
        if isinstance(node, ast.Name) and node.id in ("i", "n", "k"):
            return i
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand, i)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            a, b = ev(node.left, i), ev(node.right, i)
            if isinstance(node.op, ast.Pow):
                if b.denominator != 1:
                    raise OperatorError("only integer exponents are exact")
                return a ** int(b)
            return _BINOPS[type(node.op)](a, b)
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id in _FUNCS:
            return _FUNCS[node.func.id](*(ev(a, i) for a in node.args))
        raise OperatorError(f"unsupported formula element {ast.dump(node)[:40]}")

    def rule(i: int) -> Fraction:
        try:
            return ev(tree, Fraction(i))
        except ZeroDivisionError:
            raise OperatorError(f"formula {text!r} divides by zero at i={i}") from None

    return rule


@dataclass(frozen=True)
class Generator:
    """Closed-form rule ``i -> value`` standing for an infinite-order operator.

    ``role`` says what the values are: ``"diagonal"`` (lambda_i) or
    ``"constant_coeff"`` (alpha_i).
    """

    rule: Callable[[int], Fraction]
    role: str = "diagonal"
    formula: str | None = None

    @classmethod
    def from_formula(cls, formula: str, role: str = "diagonal") -> "Generator":
        return cls(compile_formula(formula), role, formula)


def truncate(gen: Generator, n: int) -> DiagSequence | ConstCoeffOperator:
    """Materialise values ``0..n``; the result acts on degree ``<= n`` exactly
    as the infinite operator does."""
    if n < 0:
        raise OperatorError("truncation degree must be non-negative")
    try:
        vals = [to_rat(gen.rule(i)) for i in range(n + 1)]
    except OperatorError:
        raise
    except Exception as exc:  # generator evaluation failure
        raise OperatorError(f"generator failed: {exc}") from exc
    if gen.role == "constant_coeff":
        return ConstCoeffOperator(vals)
    if gen.role == "diagonal":
        return DiagSequence(vals)
    raise OperatorError(f"unknown generator role {gen.role!r}")


# --------------------------------------------------------------------------
# wire format


def operator_from_json(obj) -> DiffOperator | ConstCoeffOperator | DiagSequence:
    """Parse the operator JSON wire format.

    ``{"type": "differential", "coeffs": [poly, ...]}`` (becomes a
    :class:`ConstCoeffOperator` when every coefficient is constant),
    ``{"type": "diagonal", "lambdas": [...]}`` or
    ``{"type": "generator", "kind": "rational_formula", "formula": ...,
    "truncate": n, "role": "diagonal" | "constant_coeff"}``.
    """
    if not isinstance(obj, dict) or "type" not in obj:
        raise OperatorError("operator JSON must be an object with a 'type' field")
    kind = obj["type"]
    try:
        if kind == "differential":
            qs = [poly_from_json(c) for c in obj["coeffs"]]
            op = DiffOperator(qs)
            if op.is_constant_coeff():
                return ConstCoeffOperator([c.coeff(0) for c in qs])
            return op
        if kind == "diagonal":
            return DiagSequence(obj["lambdas"])
        if kind == "generator":
            if obj.get("kind", "rational_formula") != "rational_formula":
                raise OperatorError(f"unknown generator kind {obj.get('kind')!r}")
            gen = Generator.from_formula(obj["formula"], obj.get("role", "diagonal"))
            return truncate(gen, int(obj["truncate"]))
    except KeyError as exc:
        raise OperatorError(f"operator JSON is missing {exc}") from None
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, OperatorError):
            raise
        raise OperatorError(str(exc)) from None
    raise OperatorError(f"unknown operator type {kind!r}")


def operator_to_json(op) -> dict:
    if isinstance(op, DiagSequence):
        return {"type": "diagonal", "lambdas": [rat_str(v) for v in op.lambdas]}
    if isinstance(op, ConstCoeffOperator):
        return {"type": "differential", "coeffs": [poly_to_json(RatPoly([a])) for a in op.alpha]}
    if isinstance(op, DiffOperator):
        return {"type": "differential", "coeffs": [poly_to_json(q) for q in op.q]}
    raise TypeError(f"not an operator: {op!r}")
