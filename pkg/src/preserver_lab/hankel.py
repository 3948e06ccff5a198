"""Hankel-matrix tests for diagonal and constant-coefficient preservers.

For a diagonal sequence the moments are ``s_m = lambda_m``; for a
constant-coefficient operator they are ``s_m = m! * alpha_m``.  In both cases
the scalar functional ``L(p) = sum_m s_m a_m`` (``T(p)(1)`` resp. ``(U p)(0)``)
satisfies ``L(v(x)**2) = v^T H v``, which is what turns a Hankel matrix that
is not positive semi-definite into an explicit positive polynomial with a bad
image.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .operators import ConstCoeffOperator, DiagSequence, OperatorError, apply_diag, apply_diff
from .polycore import RatPoly, poly_to_json, rat_str

__all__ = [
    "Verdict",
    "HankelReport",
    "Violation",
    "Counterexample",
    "hankel_matrix",
    "bareiss_det",
    "leading_minors",
    "principal_minors_nonnegative",
    "negative_direction",
    "diag_hankel",
    "const_coeff_hankel",
    "necessary_conditions",
    "eval_preserver_form",
    "positive_counterexample",
]

Matrix = list[list[Fraction]]


class Verdict(str, enum.Enum):
    POSITIVE_DEFINITE = "positive_definite"
    PSD_DEGENERATE = "positive_semidefinite_degenerate"
    INDEFINITE = "indefinite"


@dataclass(frozen=True)
class HankelReport:
    kind: str  # "diagonal" or "constant_coeff"
    moments: tuple[Fraction, ...]  # s_0 .. s_{2l}
    leading_minors: tuple[Fraction, ...]
    verdict: Verdict
    direction: tuple[Fraction, ...] | None = field(default=None, compare=False)

    @property
    def size(self) -> int:
        return (len(self.moments) + 1) // 2

    @property
    def entries(self) -> Matrix:
        return hankel_matrix(self.moments)

    def entry(self, i: int, j: int) -> Fraction:
        return self.moments[i + j]

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "size": self.size,
            "entries": [[rat_str(v) for v in row] for row in self.entries],
            "leading_minors": [rat_str(v) for v in self.leading_minors],
            "verdict": self.verdict.value,
        }


@dataclass(frozen=True)
class Violation:
    kind: str  # "negative_even_entry" | "square_bound"
    index: int
    detail: str

    def to_json(self) -> dict:
        return {"kind": self.kind, "index": self.index, "detail": self.detail}


@dataclass(frozen=True)
class Counterexample:
    """A positive ``p`` whose image is negative at ``point``."""

    p: RatPoly
    image: RatPoly
    point: Fraction
    value: Fraction

    def to_json(self) -> dict:
        return {
            "p": poly_to_json(self.p),
            "image": poly_to_json(self.image),
            "point": rat_str(self.point),
            "value": rat_str(self.value),
        }


# --------------------------------------------------------------------------
# exact linear algebra


def hankel_matrix(moments: Sequence[Fraction]) -> Matrix:
    if len(moments) % 2 == 0:
        raise ValueError("a square Hankel matrix needs an odd number of moments")
    n = (len(moments) + 1) // 2
    return [[moments[i + j] for j in range(n)] for i in range(n)]


def _integer_matrix(M: Matrix) -> tuple[list[list[int]], int]:
    den = math.lcm(*(v.denominator for row in M for v in row)) if M else 1
    return [[int(v * den) for v in row] for row in M], den


def _bareiss_int(A: list[list[int]]) -> int:
    n = len(A)
    if n == 0:
        return 1
    A = [row[:] for row in A]
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if A[r][k] != 0), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def bareiss_det(M: Matrix) -> Fraction:
    """Exact determinant via fraction-free (Bareiss) elimination."""
    A, den = _integer_matrix(M)
    return Fraction(_bareiss_int(A), den ** len(M))


def leading_minors(M: Matrix) -> list[Fraction]:
    """``Delta_0 .. Delta_{n-1}``: determinants of the leading ``k+1`` blocks.

    Without pivoting the Bareiss pivots *are* the leading minors; a zero pivot
    sends the remaining minors through individual pivoted determinants.
    """
    n = len(M)
    A, den = _integer_matrix(M)
    out: list[Fraction] = []
    prev = 1
    W = [row[:] for row in A]
    for k in range(n):
        piv = W[k][k]
        out.append(Fraction(piv, den ** (k + 1)))
        if piv == 0:
            for m in range(k + 1, n):
                out.append(bareiss_det([row[: m + 1] for row in M[: m + 1]]))
            return out
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                W[i][j] = (W[i][j] * piv - W[i][k] * W[k][j]) // prev
        prev = piv
    return out


def principal_minors_nonnegative(M: Matrix) -> bool:
    n = len(M)
    for size in range(1, n + 1):
        for idx in itertools.combinations(range(n), size):
            sub = [[M[i][j] for j in idx] for i in idx]
            if bareiss_det(sub) < 0:
                return False
    return True


def negative_direction(M: Matrix) -> list[Fraction] | None:
    """Exact ``v`` with ``v^T M v < 0``, or ``None`` when ``M`` is PSD.

    Symmetric elimination: a negative diagonal entry is a direction; a zero
    diagonal entry with a nonzero row yields a two-term direction; a positive
    pivot reduces the question to its Schur complement.
    """
    n = len(M)
    if n == 0:
        return None
    for i in range(n):
        if M[i][i] < 0:
            v = [Fraction(0)] * n
            v[i] = Fraction(1)
            return v
    if M[0][0] == 0:
        j = next((j for j in range(1, n) if M[0][j] != 0), None)
        if j is None:
            sub = negative_direction([row[1:] for row in M[1:]])
            return None if sub is None else [Fraction(0)] + sub
        # v = t e_0 + e_j: v^T M v = 2 t M_0j + M_jj
        t = -(M[j][j] + 1) / (2 * M[0][j])
        v = [Fraction(0)] * n
        v[0], v[j] = t, Fraction(1)
        return v
    piv = M[0][0]
    schur = [[M[i][j] - M[i][0] * M[0][j] / piv for j in range(1, n)] for i in range(1, n)]
    w = negative_direction(schur)
    if w is None:
        return None
    v0 = -sum(M[0][j + 1] * w[j] for j in range(n - 1)) / piv
    return [v0] + w


def _quad(M: Matrix, v: Sequence[Fraction]) -> Fraction:
    n = len(M)
    return sum(v[i] * M[i][j] * v[j] for i in range(n) for j in range(n))


def _report(kind: str, moments: list[Fraction]) -> HankelReport:
    M = hankel_matrix(moments)
    minors = leading_minors(M)
    if all(d > 0 for d in minors):
        return HankelReport(kind, tuple(moments), tuple(minors), Verdict.POSITIVE_DEFINITE)
    v = negative_direction(M)
    psd = principal_minors_nonnegative(M)
    if psd != (v is None):  # pragma: no cover - the two tests are equivalent
        raise AssertionError("elimination and principal-minor PSD tests disagree")
    if psd:
        return HankelReport(kind, tuple(moments), tuple(minors), Verdict.PSD_DEGENERATE)
    assert _quad(M, v) < 0
    return HankelReport(kind, tuple(moments), tuple(minors), Verdict.INDEFINITE, tuple(v))


def diag_hankel(T: DiagSequence) -> HankelReport:
    """Hankel test of ``(lambda_{i+j})``; an odd truncation degree drops its
    top entry (odd-degree positive polynomials do not exist)."""
    n = T.degree if T.degree % 2 == 0 else T.degree - 1
    return _report("diagonal", list(T.lambdas[: n + 1]))


def const_coeff_hankel(U: ConstCoeffOperator, k: int) -> HankelReport:
    """Hankel test of ``((i+j)! alpha_{i+j})`` on polynomials of degree ``<= k``."""
    if k < 0 or k % 2:
        raise OperatorError("the degree bound must be even and non-negative")
    moments = [math.factorial(m) * U.coeff(m) for m in range(k + 1)]
    return _report("constant_coeff", [Fraction(m) for m in moments])


# --------------------------------------------------------------------------
# necessary conditions, the preserver functional, counterexamples


def necessary_conditions(T: DiagSequence) -> list[Violation]:
    lam = list(T.lambdas)
    if lam[0] < 0:
        lam = [-v for v in lam]
    n = len(lam) - 1
    out: list[Violation] = []
    for i in range(0, n + 1, 2):
        if lam[i] < 0:
            out.append(Violation("negative_even_entry", i, f"lambda_{i} = {rat_str(lam[i])} < 0"))
    for i in range(1, n // 2 + 1):
        lhs, rhs = lam[i] ** 2, lam[0] * lam[2 * i]
        if lhs > rhs:
            out.append(
                Violation(
                    "square_bound",
                    i,
                    f"lambda_{i}^2 = {rat_str(lhs)} > lambda_0*lambda_{2 * i} = {rat_str(rhs)}",
                )
            )
    return out


def eval_preserver_form(op: ConstCoeffOperator | DiagSequence, p: RatPoly) -> Fraction:
    """``(U p)(0) = sum i! a_i alpha_i`` or ``T(p)(1) = sum lambda_i a_i``."""
    if isinstance(op, DiagSequence):
        if p.degree > op.degree:
            raise OperatorError(f"degree {p.degree} exceeds the truncation degree {op.degree}")
        return sum((lam * a for lam, a in zip(op.lambdas, p.coeffs)), Fraction(0))
    if isinstance(op, ConstCoeffOperator):
        return sum(
            (math.factorial(i) * a * op.coeff(i) for i, a in enumerate(p.coeffs)),
            Fraction(0),
        )
    raise TypeError("expected a diagonal sequence or a constant-coefficient operator")


def positive_counterexample(
    op: ConstCoeffOperator | DiagSequence, report: HankelReport
) -> Counterexample | None:
    """Positive ``p = v(x)**2 + eps`` with a negative image, when the report is
    indefinite; ``None`` otherwise."""
    if report.verdict is not Verdict.INDEFINITE:
        return None
    M = report.entries
    v = report.direction or negative_direction(M)
    quad = _quad(M, v)
    vpoly = RatPoly(v)
    s0 = report.moments[0]
    eps = Fraction(1) if s0 <= 0 else -quad / (2 * s0)
    p = vpoly * vpoly + eps
    if isinstance(op, DiagSequence):
        image, point = apply_diag(op, p), Fraction(1)
    else:
        image, point = apply_diff(op, p), Fraction(0)
    value = image(point)
    assert value == quad + eps * s0 and value < 0
    return Counterexample(p, image, point, value)
