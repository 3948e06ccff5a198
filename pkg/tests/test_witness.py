import itertools
import math
import random
from dataclasses import replace
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from preserver_lab.classify import Tri, classify
from preserver_lab.operators import DiffOperator, apply_diff
from preserver_lab.polycore import RatPoly, derivative, parse_poly
from preserver_lab.sampling import diff_operator
from preserver_lab.witness import (
    Construction,
    WitnessError,
    b_from_a,
    find_x0,
    gl_table,
    verify_certificate,
    w_from_u,
    witness_auto,
    witness_ct3,
    witness_t1,
    witness_t2,
    witness_t3,
)

P = parse_poly
X = P("x")


def sigma(ys, l):
    return sum((math.prod(c) for c in itertools.combinations(ys, l)), F(0))


def test_gl_table_small_orders():
    t = gl_table(3)
    assert t.g(1, []) == 0 and t.terms[0] == ()
    assert t.g(2, [F(3)]) == 2 * 9
    assert t.g(3, [F(3), F(5)]) == 12 * 15


def test_b_from_a_inverts_w_from_u():
    # with g_1 = 0 the first equation is a_1 = 2 b_1
    assert b_from_a([F(6)], gl_table(1)) == [3]
    t = gl_table(2)
    assert b_from_a([1, 2], t) == [F(1, 2), F(3, 8)]
    assert b_from_a([0, -4], t) == [0, -1]
    for a in ([1, 2], [0, -4], [F(5, 3), -7, 2, F(1, 9)]):
        tab = gl_table(len(a))
        assert w_from_u(b_from_a(a, tab), tab) == [F(v) for v in a]


def _w_direct(roots, x0, k):
    p1 = RatPoly.from_roots(roots)
    p = p1 * p1
    return [derivative(p, l)(x0) / p(x0) for l in range(1, k + 1)]


@given(
    st.integers(1, 4).flatmap(
        lambda k: st.tuples(
            st.just(k),
            st.lists(st.fractions(-6, 6, max_denominator=5), min_size=k, max_size=k),
            st.fractions(-6, 6, max_denominator=5),
        )
    )
)
def test_derivative_identity_against_subset_sums(data):
    k, roots, x0 = data
    if x0 in roots:
        return
    ys = [1 / (x0 - r) for r in roots]
    u = [sigma(ys, l) for l in range(1, k + 1)]
    assert w_from_u(u, gl_table(k)) == _w_direct(roots, x0, k)


@pytest.mark.parametrize(
    "qs, x0",
    [([1, X], 1), ([1, P("x^2-1"), P("x-2")], -2), ([5], 1)],
)
def test_find_x0(qs, x0):
    assert find_x0(DiffOperator(qs)) == x0


def test_t1_first_order():
    U = DiffOperator([1, 1])
    cert = witness_t1(U)
    assert cert.construction is Construction.T1
    assert cert.x0 == 1 and cert.p == P("x^2-4x+4") and cert.value == -1
    assert verify_certificate(U, cert)
    # the same construction at x0 = 0 is (x-1)^2, i.e. the one above shifted by 1
    assert apply_diff(U, P("x^2-2x+1"))(0) == -1


def test_t1_second_order_has_degree_four():
    U = DiffOperator([1, 0, 1])
    cert = witness_t1(U)
    assert cert.degree_used == 4 and cert.value < 0 and verify_certificate(U, cert)


def test_negative_constant_term_fast_path():
    U = DiffOperator([-1, 1])
    cert = witness_t1(U)
    assert cert.p == RatPoly([1]) and cert.x0 == 0 and cert.value == -1
    assert cert.details == {"path": "constant_term"}


def test_t1_rejects_order_zero():
    with pytest.raises(WitnessError):
        witness_t1(DiffOperator([2]))
    with pytest.raises(WitnessError):
        witness_t1(DiffOperator([0, 0]))


@pytest.mark.parametrize("seed", range(8))
def test_t1_random_operators(seed):
    rng = random.Random(seed)
    U = diff_operator(rng, rng.randint(1, 4))
    cert = witness_t1(U, seed=seed)
    assert cert.degree_used <= 2 * U.order
    assert verify_certificate(U, cert)
    assert classify(cert.p).nonnegative is Tri.YES


def test_t2_examples():
    cert = witness_t2(DiffOperator([0, 1]))
    assert cert.p == P("x^2-4x+4") and cert.x0 == 1 and cert.value == -2
    U = DiffOperator([1, 0, 0, 1])
    cert = witness_t2(U)
    assert cert.degree_used == 4 and cert.value < 0 and verify_certificate(U, cert)
    assert cert.p == (X - 2) ** 4 and cert.value == -23
    U = DiffOperator([0, X])
    cert = witness_t2(U)
    assert cert.x0 == 1 and cert.p == (X - 2) ** 2 and cert.value == -2
    with pytest.raises(WitnessError):
        witness_t2(DiffOperator([1, 0, 1]))


def test_t3_examples():
    U = DiffOperator([0, 0, -1])
    cert = witness_t3(U)
    assert cert.degree_used == 2 and apply_diff(U, cert.p) == RatPoly([-2])
    U = DiffOperator([1, 0, X])
    cert = witness_t3(U)
    assert cert.x0 < 0 and cert.degree_used == 2 and verify_certificate(U, cert)
    assert (cert.x0, cert.p, cert.value) == (-1, (X + 2) ** 2, -1)


def test_t3_requires_true_even_order():
    with pytest.raises(WitnessError):
        witness_t3(DiffOperator([1, X, 0]))


def test_t3_reports_unverifiable_hypothesis():
    # q_2 = x^2 + 1 is positive, so no x0 has q_k(x0) < 0
    with pytest.raises(WitnessError, match="precondition"):
        witness_t3(DiffOperator([1, 0, P("x^2+1")]))


def test_t3_zero_of_leading_coefficient():
    # q_2(0) = 0 with q_1(0) != 0
    U = DiffOperator([1, 1, P("x^2")])
    cert = witness_t3(U)
    assert cert.degree_used == 2 and verify_certificate(U, cert)


def test_restriction_construction():
    U = DiffOperator([1, 0, -1, 0, 1])
    cert = witness_ct3(U)
    assert cert.construction is Construction.CT3
    assert cert.details["restricted_order"] == 2
    assert verify_certificate(U, cert)
    with pytest.raises(WitnessError):
        witness_ct3(U, 3)


def test_auto_picks_smallest_construction():
    assert witness_auto(DiffOperator([1, 0, 0, 1])).construction is Construction.T2
    assert witness_auto(DiffOperator([0, 0, -1])).construction is Construction.T3
    cert = witness_auto(DiffOperator([1, 0, 1]))
    assert cert.construction is Construction.T1 and cert.degree_used == 4


def test_tampered_certificate_fails():
    U = DiffOperator([1, 1])
    cert = witness_t1(U)
    assert not verify_certificate(U, replace(cert, value=cert.value - 1))
    assert not verify_certificate(U, replace(cert, p=P("x^2-1")))


def test_certificate_json():
    d = witness_t1(DiffOperator([1, 1])).to_json()
    assert d["p"] == {"coeffs": ["4", "-4", "1"]} and d["x0"] == "1" and d["value"] == "-1"
    assert d["construction"] == "T1" and d["nonneg_proof"]["nonnegative"]
