import json
from fractions import Fraction as F

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from conftest import polys, rats
from preserver_lab.polycore import (
    CxRatPoly,
    RatPoly,
    add,
    derivative,
    divmod_poly,
    elementary_symmetric_to_monic,
    evaluate,
    gcd,
    mul,
    parse_poly,
    poly_from_json,
    poly_to_json,
    rat_str,
    shift,
    square_free_decomposition,
    square_free_part,
    to_rat,
)

x = sympy.Symbol("x")


def to_sympy(p: RatPoly):
    return sympy.Poly(list(reversed([sympy.Rational(c.numerator, c.denominator) for c in p.coeffs])) or [0], x)


def from_sympy(expr) -> RatPoly:
    coeffs = sympy.Poly(expr, x).all_coeffs()[::-1]
    return RatPoly(F(int(c.p), int(c.q)) for c in coeffs)


def test_canonical_form():
    p = RatPoly([F(2, 4), 0, 0])
    assert p.coeffs == (F(1, 2),)
    assert RatPoly([0, 0]).is_zero
    assert RatPoly().degree == float("-inf")
    assert RatPoly([1, 2, 3]).degree == 2


def test_to_rat_rejects_floats():
    assert to_rat("3/6") == F(1, 2)
    assert to_rat(4) == 4
    with pytest.raises(TypeError):
        to_rat(0.5)


@pytest.mark.parametrize(
    "p, q, expected",
    [("x^2+1", "-x^2", "1"), ("x+1", "0", "x+1"), ("x+1", "x-1", "2x")],
)
def test_add_examples(p, q, expected):
    assert add(parse_poly(p), parse_poly(q)) == parse_poly(expected)


def test_mul_examples():
    assert mul(parse_poly("x+1"), parse_poly("x-1")) == parse_poly("x^2-1")
    assert parse_poly("x+1") * parse_poly("305x^3+495x^2+243x+29") == parse_poly(
        "305x^4+800x^3+738x^2+272x+29"
    )
    assert (parse_poly("x^3+2") * RatPoly()).is_zero


def test_derivative_examples():
    assert derivative(parse_poly("x^2")) == parse_poly("2x")
    assert derivative(parse_poly("x^4"), 2) == parse_poly("12x^2")
    assert derivative(parse_poly("x^2"), 3).is_zero


def test_shift_and_eval_examples():
    assert shift(parse_poly("x^2"), 1) == parse_poly("x^2-2x+1")
    assert evaluate(parse_poly("x^2-1"), F(0)) == -1
    assert square_free_part(parse_poly("x^2-2x+1")) == parse_poly("x-1")
    assert gcd(parse_poly("x^2-1"), parse_poly("x-1")) == parse_poly("x-1")


def test_gcd_zero_zero_raises():
    with pytest.raises(ValueError):
        gcd(RatPoly(), RatPoly())


@pytest.mark.parametrize(
    "b, k, expected",
    [((3, 2), 2, "x^2-3x+2"), ((0, 0, 0), 3, "x^3"), ((1, 1), 2, "x^2-x+1")],
)
def test_elementary_symmetric_to_monic(b, k, expected):
    assert elementary_symmetric_to_monic(b, k) == parse_poly(expected)


def test_elementary_symmetric_vieta_oracle():
    roots = [F(1, 2), F(-3), F(5, 7), F(2)]
    z = sympy.Symbol("z")
    b = [sum(sympy.prod(c) for c in __import__("itertools").combinations(
        [sympy.Rational(r.numerator, r.denominator) for r in roots], l)) for l in range(1, 5)]
    got = elementary_symmetric_to_monic([F(int(v.p), int(v.q)) for v in b], 4)
    assert got == RatPoly.from_roots(roots)


def test_parse_shorthand():
    assert parse_poly("305x^4+800x^3+738x^2+272x+29").coeffs == (29, 272, 738, 800, 305)
    assert parse_poly("1/2x**2 - x + 3/4") == RatPoly([F(3, 4), -1, F(1, 2)])
    assert parse_poly("-x") == RatPoly([0, -1])
    assert parse_poly("0").is_zero
    with pytest.raises(ValueError):
        parse_poly("x^2+*")


def test_json_round_trip():
    p = parse_poly("3/2x^3 - 7x + 1")
    blob = json.dumps(poly_to_json(p))
    assert poly_from_json(blob) == p
    assert poly_from_json({"coeffs": ["1", 0, "-1/3"]}) == RatPoly([1, 0, F(-1, 3)])
    assert poly_from_json([1, 2]) == parse_poly("2x+1")
    assert poly_to_json(RatPoly()) == {"coeffs": []}
    assert rat_str(F(-3, 4)) == "-3/4" and rat_str(F(5)) == "5"


def test_square_free_decomposition():
    p = RatPoly([3]) * parse_poly("x-1") ** 3 * parse_poly("x^2+1") * parse_poly("x+2") ** 2
    c, factors = square_free_decomposition(p)
    assert c == 3
    got = {m: f for f, m in factors}
    assert got[1] == parse_poly("x^2+1")
    assert got[2] == parse_poly("x+2")
    assert got[3] == parse_poly("x-1")
    rebuilt = RatPoly([c])
    for f, m in factors:
        rebuilt = rebuilt * f ** m
    assert rebuilt == p


def test_complex_rational_poly():
    q = CxRatPoly.linear_root(F(1), F(2)) * CxRatPoly.linear_root(F(1), F(-2))
    assert q.im.is_zero
    assert q.re == parse_poly("x^2-2x+5")


# ring axioms and calculus identities


@given(polys(), polys(), polys())
def test_ring_axioms(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p - p == RatPoly()


@given(polys(), polys())
def test_mul_matches_sympy(p, q):
    assert from_sympy((to_sympy(p) * to_sympy(q)).as_expr()) == p * q


@given(polys(), polys())
def test_leibniz(p, q):
    assert derivative(p * q) == derivative(p) * q + p * derivative(q)


@given(polys(), rats, rats)
def test_shift_properties(p, c, t):
    assert shift(shift(p, c), -c) == p
    assert shift(p, c)(t + c) == p(t)
    assert shift(p, 0) == p


@given(polys(max_degree=6), polys(max_degree=3))
def test_divmod(p, d):
    if d.is_zero:
        return
    qq, r = divmod_poly(p, d)
    assert qq * d + r == p
    assert r.is_zero or r.degree < d.degree


@given(polys(max_degree=4), polys(max_degree=4))
def test_gcd_matches_sympy(p, q):
    if p.is_zero and q.is_zero:
        return
    g = gcd(p, q)
    expected = sympy.gcd(to_sympy(p), to_sympy(q)).monic()
    assert g == from_sympy(expected.as_expr()) if not expected.is_zero else g.is_zero


@given(st.lists(st.fractions(min_value=-4, max_value=4, max_denominator=3), min_size=1, max_size=5))
def test_square_free_part_has_distinct_roots(roots):
    p = RatPoly.from_roots(roots)
    assert square_free_part(p) == RatPoly.from_roots(sorted(set(roots)))
