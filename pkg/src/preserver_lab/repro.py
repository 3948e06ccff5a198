"""Regression corpus of the worked numeric examples.

Each case carries its inputs, exact expected values, where the expectation
comes from (``anchor``), and a ``run`` function returning ``(passed, details)``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .classify import classify, nonreal_root_count
from .hankel import Verdict, const_coeff_hankel, diag_hankel, necessary_conditions, positive_counterexample
from .operators import ConstCoeffOperator, DiagSequence, DiffOperator, Generator, apply_diag, apply_diff, invert_diag, truncate
from .polycore import RatPoly, parse_poly, poly_to_json, rat_str
from .roots import count_real_roots
from .sampling import hyperbolic_poly, positive_poly

F = Fraction

COUNT_LAMBDAS = tuple(F(1, d) for d in (29, 68, 123, 200, 305))
COUNT_FORMULA = "1/(i^3+5*i^2+33*i+29)"
# minors computed by an independent exact determinant (sympy) and frozen
COUNT_MINORS = (F(1, 29), F(1057, 16493808), F(238253857, 38054060237880000))
COUNT_IMAGE = parse_poly("305x^4+800x^3+738x^2+272x+29")
COUNT_FACTORED = parse_poly("x+1") * parse_poly("305x^3+495x^2+243x+29")


@dataclass(frozen=True)
class ReproCase:
    id: str
    inputs: dict
    expected: dict
    anchor: str
    run: Callable[[int], tuple[bool, dict]]


def _count_i(seed: int) -> tuple[bool, dict]:
    T = DiagSequence(COUNT_LAMBDAS)
    report = diag_hankel(T)
    gen = truncate(Generator.from_formula(COUNT_FORMULA), 4)
    ok = (
        report.verdict is Verdict.POSITIVE_DEFINITE
        and report.leading_minors == COUNT_MINORS
        and gen.lambdas == COUNT_LAMBDAS
        and not necessary_conditions(T)
    )
    return ok, {
        "verdict": report.verdict.value,
        "leading_minors": [rat_str(v) for v in report.leading_minors],
        "generator_values": [rat_str(v) for v in gen.lambdas],
    }


def _count_ii(seed: int) -> tuple[bool, dict]:
    inv = invert_diag(DiagSequence(COUNT_LAMBDAS))
    image = apply_diag(inv, RatPoly([1, 1]) ** 4)
    n_real = count_real_roots(image, with_multiplicity=True)
    ok = (
        inv.lambdas == (29, 68, 123, 200, 305)
        and image == COUNT_IMAGE
        and image == COUNT_FACTORED
        and n_real == 2
        and nonreal_root_count(image) == 2
    )
    return ok, {"image": str(image), "real_roots": n_real, "nonreal_roots": nonreal_root_count(image)}


def _count_iii(seed: int) -> tuple[bool, dict]:
    rng = random.Random(seed)
    gen = Generator.from_formula("1+i+i^2")
    hyper_ok = True
    for degree in range(1, 7):
        T = truncate(gen, degree)
        for _ in range(5):
            p = hyperbolic_poly(rng, degree)
            img = apply_diag(T, p)
            if count_real_roots(img, with_multiplicity=True) != degree:
                hyper_ok = False
    inv_gen = Generator.from_formula("1/(1+i+i^2)")
    # the degree-4 truncation of the inverse is still positive definite;
    # the first failure appears in degree 6
    verdicts = {n: diag_hankel(truncate(inv_gen, n)).verdict.value for n in (4, 6)}
    T6 = truncate(inv_gen, 6)
    rep = diag_hankel(T6)
    cx = positive_counterexample(T6, rep)
    found = cx is not None and classify(cx.p).positive.value == "yes" and classify(cx.image).positive.value == "no"
    ok = hyper_ok and verdicts == {4: "positive_definite", 6: "indefinite"} and found
    return ok, {
        "hyperbolicity_preserved": hyper_ok,
        "inverse_verdicts": verdicts,
        "counterexample": cx.to_json() if cx else None,
    }


def _ehr(seed: int) -> tuple[bool, dict]:
    report = const_coeff_hankel(ConstCoeffOperator([1] * 13), 12)
    expected = [math.prod(math.factorial(j) ** 2 for j in range(1, l + 1)) for l in range(7)]
    got = list(report.leading_minors)
    ok = got == expected and report.verdict is Verdict.POSITIVE_DEFINITE
    return ok, {"leading_minors": [rat_str(v) for v in got], "delta_3": rat_str(got[3])}


def _ex_exists(seed: int) -> tuple[bool, dict]:
    rng = random.Random(seed)
    failures = 0
    params = []
    for k in (2, 4):
        a = F(rng.randint(0, 9), rng.randint(1, 4))
        b = F(rng.randint(0, 9), rng.randint(1, 4))
        params.append({"k": k, "a": rat_str(a), "b": rat_str(b)})
        U = DiffOperator([RatPoly([1])] + [RatPoly()] * (k - 1) + [RatPoly.monomial(k, a) + b])
        for _ in range(100):
            p = positive_poly(rng, k)
            if classify(apply_diff(U, p)).positive.value != "yes":
                failures += 1
    return failures == 0, {"operators": params, "failures": failures}


CASES: dict[str, ReproCase] = {
    c.id: c
    for c in [
        ReproCase(
            "count-i",
            {"lambdas": [rat_str(v) for v in COUNT_LAMBDAS], "formula": COUNT_FORMULA},
            {"verdict": "positive_definite", "leading_minors": [rat_str(v) for v in COUNT_MINORS]},
            "Lambda-sequence (1/29, 1/68, 1/123, 1/200, 1/305) = 1/(i^3+5i^2+33i+29), i <= 4",
            _count_i,
        ),
        ReproCase(
            "count-ii",
            {"lambdas": ["29", "68", "123", "200", "305"], "p": "(x+1)^4"},
            {"image": poly_to_json(COUNT_IMAGE), "real_roots": 2},
            "inverse sends (x+1)^4 to (x+1)(305x^3+495x^2+243x+29): two real, two complex roots",
            _count_ii,
        ),
        ReproCase(
            "count-iii",
            {"sequence": "1+i+i^2", "inverse": "1/(1+i+i^2)"},
            {"hyperbolicity_preserved": True, "inverse_counterexample_degree": 6},
            "{1+i+i^2} preserves hyperbolicity; {1/(1+i+i^2)} does not preserve positivity",
            _count_iii,
        ),
        ReproCase(
            "ehr",
            {"alpha": "all ones", "degree": 12},
            {"leading_minors": "prod_{j<=l} (j!)^2, l = 0..6"},
            "Delta_l = prod_{j=1}^l (j!)^2 for (1 - d/dx)^{-1}",
            _ehr,
        ),
        ReproCase(
            "ex-exists",
            {"operator": "1 + (a x^k + b) d^k/dx^k", "k": [2, 4]},
            {"failures": 0},
            "1 + (a x^k + b) d^k/dx^k preserves positivity on degree <= k for a, b >= 0",
            _ex_exists,
        ),
    ]
}


def run_case(case_id: str, seed: int = 0) -> tuple[bool, dict]:
    if case_id not in CASES:
        raise KeyError(case_id)
    return CASES[case_id].run(seed)


def run_all(seed: int = 0) -> list[tuple[str, bool, dict]]:
    return [(cid, *run_case(cid, seed)) for cid in sorted(CASES)]
