"""Exact univariate polynomial arithmetic over the rationals.

A :class:`RatPoly` stores its coefficients in ascending degree order,
``coeffs[i]`` being the coefficient of ``x**i``.  The zero polynomial has an
empty coefficient tuple and degree ``NEG_INF``.  Rationals are plain
:class:`fractions.Fraction` values, which already keep ``gcd(num, den) == 1``
and ``den >= 1``.
"""

from __future__ import annotations

import json
import math
import re
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rat = Fraction
RatLike = Union[Fraction, int, str]

NEG_INF = float("-inf")

__all__ = [
    "Rat",
    "NEG_INF",
    "RatPoly",
    "CxRatPoly",
    "to_rat",
    "rat_str",
    "add",
    "mul",
    "derivative",
    "shift",
    "evaluate",
    "gcd",
    "square_free_part",
    "square_free_decomposition",
    "divmod_poly",
    "elementary_symmetric_to_monic",
    "parse_poly",
    "poly_from_json",
    "poly_to_json",
]


def to_rat(value: RatLike) -> Fraction:
    """Coerce ints, ``"p/q"`` strings and Fractions to a Fraction.

    Floats are rejected on purpose: every value entering the exact layer
    must be exactly representable as written.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def rat_str(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _strip(coeffs: Iterable[Fraction]) -> tuple[Fraction, ...]:
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


class RatPoly:
    """Immutable polynomial with exact rational coefficients."""

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable[RatLike] = ()):
        self.coeffs: tuple[Fraction, ...] = _strip(to_rat(c) for c in coeffs)
        self._hash: int | None = None

    # construction helpers
    @classmethod
    def const(cls, c: RatLike) -> "RatPoly":
        return cls([c])

    @classmethod
    def x(cls) -> "RatPoly":
        return cls([0, 1])

    @classmethod
    def monomial(cls, degree: int, c: RatLike = 1) -> "RatPoly":
        return cls([0] * degree + [c])

    @classmethod
    def from_roots(cls, roots: Iterable[RatLike]) -> "RatPoly":
        out = cls([1])
        for r in roots:
            out = out * cls([-to_rat(r), 1])
        return out

    # basic properties
    @property
    def degree(self) -> int | float:
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def coeff(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def monic(self) -> "RatPoly":
        if self.is_zero:
            return self
        lc = self.leading
        return RatPoly(c / lc for c in self.coeffs)

    # arithmetic
    def __add__(self, other: "RatPoly | RatLike") -> "RatPoly":
        return add(self, _lift(other))

    __radd__ = __add__

    def __neg__(self) -> "RatPoly":
        return RatPoly(-c for c in self.coeffs)

    def __sub__(self, other: "RatPoly | RatLike") -> "RatPoly":
        return add(self, -_lift(other))

    def __rsub__(self, other: "RatPoly | RatLike") -> "RatPoly":
        return add(_lift(other), -self)

    def __mul__(self, other: "RatPoly | RatLike") -> "RatPoly":
        return mul(self, _lift(other))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "RatPoly":
        if n < 0:
            raise ValueError("negative power")
        result, base = RatPoly([1]), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __call__(self, x: RatLike) -> Fraction:
        return evaluate(self, to_rat(x))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, RatPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == _strip([Fraction(other)])
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.coeffs)
        return self._hash

    def __repr__(self) -> str:
        return f"RatPoly({self})"

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if i == 0:
                body = rat_str(mag)
            else:
                head = "" if mag == 1 else rat_str(mag) + "*" if mag.denominator != 1 else str(mag)
                body = head + ("x" if i == 1 else f"x^{i}")
            terms.append((sign, body))
        first_sign, first = terms[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            text += f" {sign} {body}"
        return text

    def to_json(self) -> dict:
        return poly_to_json(self)


def _lift(value: "RatPoly | RatLike") -> RatPoly:
    return value if isinstance(value, RatPoly) else RatPoly([value])


def add(p: RatPoly, q: RatPoly) -> RatPoly:
    n = max(len(p.coeffs), len(q.coeffs))
    return RatPoly(p.coeff(i) + q.coeff(i) for i in range(n))


def mul(p: RatPoly, q: RatPoly) -> RatPoly:
    if p.is_zero or q.is_zero:
        return RatPoly()
    out = [Fraction(0)] * (len(p.coeffs) + len(q.coeffs) - 1)
    for i, a in enumerate(p.coeffs):
        if a == 0:
            continue
        for j, b in enumerate(q.coeffs):
            out[i + j] += a * b
    return RatPoly(out)


def derivative(p: RatPoly, order: int = 1) -> RatPoly:
    if order < 0:
        raise ValueError("derivative order must be non-negative")
    coeffs = p.coeffs
    if order >= len(coeffs):
        return RatPoly()
    # x^i -> i!/(i-order)! x^(i-order)
    return RatPoly(
        coeffs[i] * math.perm(i, order) for i in range(order, len(coeffs))
    )


def evaluate(p: RatPoly, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


def shift(p: RatPoly, c: RatLike) -> RatPoly:
    """Return ``q`` with ``q(x) = p(x - c)`` (Taylor re-expansion at ``-c``)."""
    c = to_rat(c)
    if c == 0 or p.is_zero:
        return p
    # Horner in the ring: q = (...(a_n (x-c) + a_{n-1})(x-c) + ...)
    lin = RatPoly([-c, 1])
    acc = RatPoly()
    for a in reversed(p.coeffs):
        acc = acc * lin + a
    return acc


def divmod_poly(p: RatPoly, d: RatPoly) -> tuple[RatPoly, RatPoly]:
    if d.is_zero:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(p.coeffs)
    dd = len(d.coeffs) - 1
    lc = d.leading
    if len(rem) - 1 < dd:
        return RatPoly(), p
    quot = [Fraction(0)] * (len(rem) - dd)
    for k in range(len(rem) - 1 - dd, -1, -1):
        c = rem[k + dd] / lc
        quot[k] = c
        if c:
            for j, b in enumerate(d.coeffs):
                rem[k + j] -= c * b
    return RatPoly(quot), RatPoly(rem[:dd])


def gcd(p: RatPoly, q: RatPoly) -> RatPoly:
    """Monic greatest common divisor; ``gcd(0, 0)`` raises ``ValueError``."""
    if p.is_zero and q.is_zero:
        raise ValueError("gcd(0, 0) is undefined")
    a, b = p, q
    while not b.is_zero:
        a, b = b, divmod_poly(a, b)[1]
    return a.monic()


def square_free_part(p: RatPoly) -> RatPoly:
    if p.is_zero:
        raise ValueError("square-free part of the zero polynomial")
    if p.is_constant():
        return RatPoly([1])
    g = gcd(p, derivative(p))
    return divmod_poly(p, g)[0].monic()


def square_free_decomposition(p: RatPoly) -> tuple[Fraction, list[tuple[RatPoly, int]]]:
    """Yun's algorithm: ``p = c * prod(f_m ** m)`` with monic, pairwise coprime,
    square-free ``f_m``.  Only factors of positive degree are returned."""
    if p.is_zero:
        raise ValueError("square-free decomposition of the zero polynomial")
    c = p.leading
    f = p.monic()
    if f.is_constant():
        return c, []
    out: list[tuple[RatPoly, int]] = []
    df = derivative(f)
    a = gcd(f, df)
    b = divmod_poly(f, a)[0]
    cc = divmod_poly(df, a)[0]
    d = cc - derivative(b)
    m = 1
    while not b.is_constant():
        a = gcd(b, d)
        if not a.is_constant():
            out.append((a.monic(), m))
        b = divmod_poly(b, a)[0]
        cc = divmod_poly(d, a)[0]
        d = cc - derivative(b)
        m += 1
    return c, out


def elementary_symmetric_to_monic(b: Sequence[RatLike], k: int) -> RatPoly:
    """Monic degree-``k`` polynomial whose roots have elementary symmetric
    functions ``b[0], ..., b[k-1]`` (Vieta: coefficient of ``z**(k-i)`` is
    ``(-1)**i * b_i``)."""
    if k < 1 or len(b) != k:
        raise ValueError("need len(b) == k >= 1")
    coeffs = [Fraction(0)] * (k + 1)
    coeffs[k] = Fraction(1)
    for i in range(1, k + 1):
        coeffs[k - i] = (-1) ** i * to_rat(b[i - 1])
    return RatPoly(coeffs)


class CxRatPoly:
    """Polynomial with Gaussian-rational coefficients, held as ``re + i*im``."""

    __slots__ = ("re", "im")

    def __init__(self, re: RatPoly, im: RatPoly | None = None):
        self.re = re
        self.im = im if im is not None else RatPoly()

    @classmethod
    def linear_root(cls, re: Fraction, im: Fraction) -> "CxRatPoly":
        """``x - (re + i*im)``"""
        return cls(RatPoly([-re, 1]), RatPoly([-im]))

    @property
    def degree(self) -> int | float:
        return max(self.re.degree, self.im.degree)

    @property
    def is_real(self) -> bool:
        return self.im.is_zero

    def __mul__(self, other: "CxRatPoly") -> "CxRatPoly":
        a, b, c, d = self.re, self.im, other.re, other.im
        return CxRatPoly(a * c - b * d, a * d + b * c)

    def __add__(self, other: "CxRatPoly") -> "CxRatPoly":
        return CxRatPoly(self.re + other.re, self.im + other.im)

    def scale(self, c: Fraction) -> "CxRatPoly":
        return CxRatPoly(self.re * c, self.im * c)

    def conj(self) -> "CxRatPoly":
        return CxRatPoly(self.re, -self.im)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CxRatPoly):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __repr__(self) -> str:
        return f"CxRatPoly(re={self.re}, im={self.im})"


# --------------------------------------------------------------------------
# parsing / wire format

_TERM = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?P<coef>\d+(?:/\d+)?)?\s*\*?\s*
        (?P<var>x(?:\s*(?:\^|\*\*)\s*(?P<exp>\d+))?)?\s*""",
    re.VERBOSE,
)


def parse_poly(text: str) -> RatPoly:
    """Parse shorthand such as ``"305x^4+800x^3-1/2x+29"``.

    Accepts ``^`` or ``**`` for powers, optional ``*`` between coefficient and
    ``x``, and rational coefficients ``p/q``.
    """
    s = text.strip()
    if not s:
        raise ValueError("empty polynomial string")
    coeffs: dict[int, Fraction] = {}
    pos = 0
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos:
            raise ValueError(f"cannot parse polynomial near {s[pos:]!r}")
        sign, coef, var = m.group("sign"), m.group("coef"), m.group("var")
        if coef is None and var is None:
            raise ValueError(f"cannot parse polynomial near {s[pos:]!r}")
        if sign is None and not first:
            raise ValueError(f"missing operator near {s[pos:]!r}")
        value = Fraction(coef) if coef is not None else Fraction(1)
        if sign == "-":
            value = -value
        if var is None:
            exp = 0
        else:
            exp = int(m.group("exp")) if m.group("exp") else 1
        coeffs[exp] = coeffs.get(exp, Fraction(0)) + value
        pos = m.end()
        first = False
    top = max(coeffs)
    return RatPoly(coeffs.get(i, 0) for i in range(top + 1))


def poly_from_json(obj) -> RatPoly:
    """Accept ``{"coeffs": [...]}``, a bare coefficient list, or shorthand."""
    if isinstance(obj, RatPoly):
        return obj
    if isinstance(obj, str):
        stripped = obj.strip()
        if stripped.startswith(("{", "[")):
            return poly_from_json(json.loads(stripped))
        return parse_poly(stripped)
    if isinstance(obj, dict):
        if "coeffs" not in obj:
            raise ValueError("polynomial object needs a 'coeffs' field")
        obj = obj["coeffs"]
    if isinstance(obj, list):
        return RatPoly(to_rat(c) for c in obj)
    if isinstance(obj, int) and not isinstance(obj, bool):
        return RatPoly([obj])
    raise ValueError(f"not a polynomial: {obj!r}")


def poly_to_json(p: RatPoly) -> dict:
    return {"coeffs": [rat_str(c) for c in p.coeffs]}
