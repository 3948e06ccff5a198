import math
from fractions import Fraction as F

import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from preserver_lab.polycore import RatPoly, derivative, divmod_poly, parse_poly
from preserver_lab.roots import approx_roots, count_real_roots, real_root_separators, sturm_chain


@pytest.mark.parametrize(
    "text, n",
    [("x^3-x", 3), ("x^2+1", 0), ("305x^4+800x^3+738x^2+272x+29", 2)],
)
def test_count_real_roots(text, n):
    assert count_real_roots(parse_poly(text)) == n


def test_count_with_multiplicity():
    p = parse_poly("x-1") ** 3 * parse_poly("x^2+1") * parse_poly("x+2")
    assert count_real_roots(p) == 2
    assert count_real_roots(p, with_multiplicity=True) == 4
    with pytest.raises(ValueError):
        count_real_roots(RatPoly())


def test_sturm_chain_shape():
    p = parse_poly("x^3-2x+1")
    chain = sturm_chain(p)
    assert chain[0] == p and chain[1] == derivative(p)
    assert chain[-1].is_constant() and not chain[-1].is_zero
    for a, b, c in zip(chain, chain[1:], chain[2:]):
        _, r = divmod_poly(a, b)
        # each remainder is the negated remainder up to a positive factor
        ratio = c.leading / (-r).leading
        assert ratio > 0 and c == (-r) * ratio


def _inside(root, z: complex) -> bool:
    dz = complex(float(root.re_center), float(root.im_center)) - z
    return abs(dz) <= float(root.radius) + 1e-12


def test_unit_imaginary():
    roots = approx_roots(parse_poly("x^2+1"), F(1, 1000))
    assert len(roots) == 2
    assert any(_inside(r, 1j) for r in roots) and any(_inside(r, -1j) for r in roots)
    assert all(r.radius <= F(1, 1000) for r in roots)


def test_vieta_pair():
    roots = approx_roots(parse_poly("x^2-3x+2"), F(1, 1000))
    assert sorted(float(r.re_center) for r in roots) == pytest.approx([1, 2])
    assert all(r.is_real for r in roots)


def test_quadratic_formula_oracle():
    roots = approx_roots(parse_poly("x^2-x+1"), F(1, 10**6))
    expected = [0.5 + 1j * math.sqrt(3) / 2, 0.5 - 1j * math.sqrt(3) / 2]
    for z in expected:
        assert any(_inside(r, z) for r in roots)
    a, b = roots
    assert a.re_center == b.re_center and a.im_center == -b.im_center
    assert a.radius == b.radius and a.multiplicity == b.multiplicity


def test_multiplicities():
    p = parse_poly("x-1") ** 3 * parse_poly("x^2+4")
    roots = approx_roots(p)
    mults = sorted((float(r.re_center), r.multiplicity) for r in roots)
    assert sum(r.multiplicity for r in roots) == 5
    assert (1.0, 3) in [(round(a, 6), m) for a, m in mults]


def test_constant_rejected():
    with pytest.raises(ValueError):
        approx_roots(RatPoly([5]))
    with pytest.raises(ValueError):
        approx_roots(parse_poly("x-1"), 0)


@given(st.lists(st.integers(-20, 20), min_size=2, max_size=7))
def test_enclosures_contain_numpy_roots(coeffs):
    p = RatPoly(coeffs)
    if p.degree < 1:
        return
    roots = approx_roots(p, F(1, 10**8))
    assert sum(r.multiplicity for r in roots) == p.degree
    n_real = sum(r.multiplicity for r in roots if r.is_real)
    assert n_real == count_real_roots(p, with_multiplicity=True)


@given(st.lists(st.integers(-9, 9), min_size=2, max_size=8))
def test_count_matches_sympy(coeffs):
    p = RatPoly(coeffs)
    if p.degree < 1:
        return
    x = sympy.Symbol("x")
    sp = sympy.Poly(list(reversed(coeffs)), x)
    assert count_real_roots(p) == len(sympy.real_roots(sp.sqf_part()))


def test_separators_split_sign_intervals():
    p = parse_poly("x^3-x")
    seps = real_root_separators(p)
    assert len(seps) == 4
    signs = [p(s) > 0 for s in seps]
    assert signs == [False, True, False, True]
    assert real_root_separators(parse_poly("x^2+1")) == [0]


def test_precision_env(monkeypatch):
    monkeypatch.setenv("PRESERVER_LAB_PRECISION", "24")
    roots = approx_roots(parse_poly("x^4-10x^2+1"), F(1, 10**20))
    assert all(r.is_real and r.radius <= F(1, 10**20) for r in roots)
    # unparsable values fall back to the default start precision
    monkeypatch.setenv("PRESERVER_LAB_PRECISION", "garbage")
    assert len(approx_roots(parse_poly("x^2-2"))) == 2
