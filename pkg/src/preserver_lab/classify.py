"""Membership in the hyperbolic / elliptic / positive / non-negative classes and
two-square decompositions of non-negative polynomials."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .polycore import CxRatPoly, RatPoly, poly_to_json, rat_str, square_free_decomposition
from .roots import CxRoot, _cx_eval, _distinct_real_roots, _mpf_to_frac, approx_roots, count_real_roots

__all__ = [
    "Tri",
    "PolyClass",
    "SOSWitness",
    "classify",
    "is_nonnegative",
    "nonnegativity_proof",
    "sos_decompose",
    "nonreal_root_count",
    "sos_residual_bound",
]


class Tri(str, enum.Enum):
    YES = "yes"
    NO = "no"
    NA = "not_applicable"

    @classmethod
    def of(cls, flag: bool) -> "Tri":
        return cls.YES if flag else cls.NO


@dataclass(frozen=True)
class SOSWitness:
    """``p ~= p1**2 + p2**2``.

    ``exact`` means equality holds exactly; otherwise ``p1``/``p2`` carry
    float64 coefficients (stored as exact binary rationals) and ``residual``
    is the exact max-coefficient error of the rounded pair.
    """

    p1: RatPoly
    p2: RatPoly
    exact: bool
    residual: Fraction
    residual_bound: Fraction

    def to_json(self) -> dict:
        if self.exact:
            p1, p2 = poly_to_json(self.p1), poly_to_json(self.p2)
        else:
            p1 = {"coeffs": [float(c) for c in self.p1.coeffs]}
            p2 = {"coeffs": [float(c) for c in self.p2.coeffs]}
        return {
            "p1": p1,
            "p2": p2,
            "exact": self.exact,
            "residual": rat_str(self.residual) if self.exact else float(self.residual),
            "residual_bound": float(self.residual_bound),
        }


@dataclass(frozen=True)
class PolyClass:
    hyperbolic: Tri
    elliptic: Tri
    positive: Tri
    nonnegative: Tri
    sos_witness: SOSWitness | None = None

    def to_json(self) -> dict:
        out = {
            "hyperbolic": self.hyperbolic.value,
            "elliptic": self.elliptic.value,
            "positive": self.positive.value,
            "nonnegative": self.nonnegative.value,
        }
        out["sos_witness"] = self.sos_witness.to_json() if self.sos_witness else None
        return out


def is_nonnegative(p: RatPoly) -> bool:
    if p.is_zero:
        return True
    if p.leading < 0:
        return False
    if p.is_constant():
        return True
    if p.degree % 2:
        return False
    _, factors = square_free_decomposition(p)
    return all(m % 2 == 0 or _distinct_real_roots(f) == 0 for f, m in factors)


def nonnegativity_proof(p: RatPoly) -> dict:
    """The facts behind :func:`is_nonnegative`, in JSON-ready form."""
    if p.is_zero or p.is_constant():
        return {
            "leading_coeff": rat_str(p.leading),
            "degree_even": True,
            "factors": [],
            "nonnegative": p.leading >= 0,
        }
    _, factors = square_free_decomposition(p)
    rows = [
        {"multiplicity": m, "degree": f.degree, "distinct_real_roots": _distinct_real_roots(f)}
        for f, m in factors
    ]
    return {
        "leading_coeff": rat_str(p.leading),
        "degree_even": p.degree % 2 == 0,
        "factors": rows,
        "nonnegative": is_nonnegative(p),
    }


def classify(p: RatPoly) -> PolyClass:
    if p.is_zero:
        return PolyClass(Tri.NA, Tri.NO, Tri.NO, Tri.YES, sos_decompose(p))
    if p.is_constant():
        pos = p.leading > 0
        return PolyClass(Tri.NA, Tri.YES, Tri.of(pos), Tri.of(pos), sos_decompose(p) if pos else None)
    n_real = count_real_roots(p, with_multiplicity=True)
    elliptic = n_real == 0
    nonneg = is_nonnegative(p)
    return PolyClass(
        hyperbolic=Tri.of(n_real == p.degree),
        elliptic=Tri.of(elliptic),
        positive=Tri.of(nonneg and elliptic),
        nonnegative=Tri.of(nonneg),
        sos_witness=sos_decompose(p) if nonneg else None,
    )


def nonreal_root_count(p: RatPoly) -> int:
    if p.is_zero:
        raise ValueError("zero polynomial")
    return int(p.degree) - count_real_roots(p, with_multiplicity=True)


# --------------------------------------------------------------------------
# sums of two squares


def sos_residual_bound(p: RatPoly) -> Fraction:
    top = max((abs(c) for c in p.coeffs), default=Fraction(0))
    return Fraction(1, 10**9) * (1 + top)


def _rational_sqrt(c: Fraction) -> Fraction | None:
    n, d = c.numerator, c.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _exact_root(f: RatPoly, z: CxRoot) -> tuple[Fraction, Fraction] | None:
    """Recover ``z`` as a Gaussian rational, if it is one."""
    den = math.lcm(*(c.denominator for c in f.coeffs))
    lead = abs(f.leading * den)
    limit = 2 * lead.numerator
    re = z.re_center.limit_denominator(limit)
    im = z.im_center.limit_denominator(limit)
    if _cx_eval(f, re, im) == (0, 0):
        return re, im
    return None


def _half_product(groups: list[tuple[Fraction, Fraction, int]]) -> CxRatPoly:
    """``prod (x - z)**m`` over real roots (m halved) and upper-half roots."""
    q = CxRatPoly(RatPoly([1]))
    for re, im, m in groups:
        power = m // 2 if im == 0 else m
        lin = CxRatPoly.linear_root(re, im)
        for _ in range(power):
            q = q * lin
    return q


def _normalise_signs(p1: RatPoly, p2: RatPoly) -> tuple[RatPoly, RatPoly]:
    if p1.leading < 0:
        p1 = -p1
    if p2.leading < 0:
        p2 = -p2
    return p1, p2


def _roots_with_factor(p: RatPoly, bound: Fraction) -> list[tuple[RatPoly, CxRoot]]:
    _, factors = square_free_decomposition(p)
    out = []
    for f, m in factors:
        for z in approx_roots(f, bound):
            out.append((f, CxRoot(z.re_center, z.im_center, z.radius, m)))
    return out


def sos_decompose(p: RatPoly) -> SOSWitness:
    """Return ``p1, p2`` with ``p = p1**2 + p2**2`` (exactly where possible).

    Raises ``ValueError`` unless ``p`` is non-negative.
    """
    if not is_nonnegative(p):
        raise ValueError(f"{p} is not non-negative")
    bound = sos_residual_bound(p)
    zero = Fraction(0)
    if p.is_zero:
        return SOSWitness(RatPoly(), RatPoly(), True, zero, bound)
    c = p.leading
    root_c = _rational_sqrt(c)

    # exact attempt: every root a (Gaussian) rational and c a rational square
    if root_c is not None:
        if p.is_constant():
            return SOSWitness(RatPoly([root_c]), RatPoly(), True, zero, bound)
        _, factors = square_free_decomposition(p)
        lead_max = max(int(abs(f.leading * math.lcm(*(x.denominator for x in f.coeffs)))) for f, _ in factors)
        coarse = Fraction(1, max(2**64, 64 * lead_max * lead_max))
        groups = []
        for f, z in _roots_with_factor(p, coarse):
            if z.im_center < 0:
                continue
            hit = _exact_root(f, z)
            if hit is None:
                groups = None
                break
            groups.append((hit[0], hit[1], z.multiplicity))
        if groups is not None:
            q = _half_product(groups).scale(root_c)
            p1, p2 = _normalise_signs(q.re, q.im)
            if p1 * p1 + p2 * p2 == p:
                return SOSWitness(p1, p2, True, zero, bound)
        # a perfect square even when its roots are irrational
        if all(m % 2 == 0 for _, m in factors):
            p1 = RatPoly([root_c])
            for f, m in factors:
                p1 = p1 * f ** (m // 2)
            return SOSWitness(p1, RatPoly(), True, zero, bound)

    # certified floating-point pair
    with mpmath.workprec(320):
        sqrt_c = _mpf_to_frac(mpmath.sqrt(mpmath.mpf(c.numerator) / c.denominator))
    if p.is_constant():
        groups = []
    else:
        fine = Fraction(1, 2**256)
        groups = [
            (z.re_center, z.im_center, z.multiplicity)
            for _, z in _roots_with_factor(p, fine)
            if z.im_center >= 0
        ]
    q = _half_product(groups).scale(sqrt_c)
    hp1, hp2 = _normalise_signs(q.re, q.im)
    p1 = RatPoly(Fraction(float(x)) for x in hp1.coeffs)
    p2 = RatPoly(Fraction(float(x)) for x in hp2.coeffs)
    resid = _residual(p, p1, p2)
    if resid > bound:
        p1, p2 = hp1, hp2
        resid = _residual(p, p1, p2)
    return SOSWitness(p1, p2, False, resid, bound)


def _residual(p: RatPoly, p1: RatPoly, p2: RatPoly) -> Fraction:
    diff = p - (p1 * p1 + p2 * p2)
    return max((abs(x) for x in diff.coeffs), default=Fraction(0))
