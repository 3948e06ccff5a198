"""Seeded generators for the property suites and the repro corpus."""

from __future__ import annotations

import math
import random
from fractions import Fraction

from .operators import DiffOperator
from .polycore import RatPoly


def rand_rat(rng: random.Random, num: int = 9, den: int = 6) -> Fraction:
    return Fraction(rng.randint(-num, num), rng.randint(1, den))


def rand_poly(rng: random.Random, degree: int, num: int = 9, den: int = 6) -> RatPoly:
    return RatPoly(rand_rat(rng, num, den) for _ in range(degree + 1))


def positive_poly(rng: random.Random, max_degree: int) -> RatPoly:
    """Positive-leading even-degree sum of squares plus a positive constant.

    The degree is ``max_degree`` rounded down to even, so images of every
    coefficient slot get exercised.
    """
    half = max_degree // 2
    p = RatPoly([Fraction(rng.randint(1, 20), rng.randint(1, 20))])
    for _ in range(2):
        r = rand_poly(rng, half)
        if r.degree < half:
            r = r + RatPoly.monomial(half, rng.randint(1, 5))
        p = p + r * r
    return p


def hyperbolic_poly(rng: random.Random, degree: int) -> RatPoly:
    return RatPoly.from_roots(rand_rat(rng, 12, 4) for _ in range(degree))


def nonnegative_rational_square_poly(rng: random.Random, max_half: int = 3) -> RatPoly:
    """``c^2 * prod (x - r)^2 * prod ((x - a)^2 + b^2)`` with rational data, so an
    exact two-square decomposition exists."""
    c = Fraction(rng.randint(1, 6), rng.randint(1, 4))
    p = RatPoly([c * c])
    for _ in range(rng.randint(1, max_half)):
        if rng.random() < 0.5:
            r = rand_rat(rng)
            p = p * RatPoly([-r, 1]) ** 2
        else:
            a, b = rand_rat(rng), rand_rat(rng) or Fraction(1)
            p = p * RatPoly([a * a + b * b, -2 * a, 1])
    return p


def nonnegative_irrational_poly(rng: random.Random) -> RatPoly:
    """Product of irreducible positive quadratics ``x^2 + bx + c`` (with
    ``b^2 - 4c`` not minus a square) times squared irreducible quadratics with
    real irrational roots."""
    p = RatPoly([Fraction(rng.randint(1, 5))])
    for _ in range(rng.randint(1, 2)):
        while True:
            b, c = Fraction(rng.randint(-6, 6)), Fraction(rng.randint(1, 12))
            disc = b * b - 4 * c
            if disc < 0 and not _is_square(-disc):
                break
        p = p * RatPoly([c, b, 1])
    if rng.random() < 0.5:
        while True:
            m = rng.randint(2, 11)
            if not _is_square(Fraction(m)):
                break
        p = p * RatPoly([-m, 0, 1]) ** 2
    return p


def _is_square(q: Fraction) -> bool:
    n, d = q.numerator, q.denominator
    return n >= 0 and math.isqrt(n) ** 2 == n and math.isqrt(d) ** 2 == d


def diff_operator(rng: random.Random, order: int, coeff_degree: int = 3,
                  nonneg_q0: bool = True) -> DiffOperator:
    """Random order-``order`` operator with coefficients of degree ``<= coeff_degree``."""
    qs = [rand_poly(rng, rng.randint(0, coeff_degree)) for _ in range(order + 1)]
    if nonneg_q0:
        r = rand_poly(rng, rng.randint(0, 1))
        qs[0] = r * r + Fraction(rng.randint(1, 9), rng.randint(1, 4))
    while qs[order].is_zero:
        qs[order] = rand_poly(rng, rng.randint(0, coeff_degree))
    return DiffOperator(qs)
