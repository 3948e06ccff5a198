"""Exact certificates that a differential operator does not preserve
non-negativity.

Every construction ends with a non-negative rational polynomial ``p`` and a
rational point ``x0`` such that ``(U p)(x0) < 0``, and every certificate is
re-checked from scratch before it is returned.

* ``witness_t1``: ``p = prod (x - t_i)**2`` of degree ``2k`` for any order ``k``.
  The ``t_i`` come from prescribing ``w_l = p^(l)(x0)/p(x0)``: the ``w`` are
  turned into elementary symmetric values ``b`` of ``1/(x0 - t_i)``, whose
  monic polynomial is solved numerically, and the ``t_i`` are rounded to
  Gaussian rationals with conjugacy kept exact.
* ``witness_t2``: ``p = (x - t0)**(k+1)`` for odd ``k``.
* ``witness_t3``: ``p = (x - t0)**k`` for even ``k`` when ``q_k`` takes a
  negative value, or vanishes where ``q_{k-1}`` does not.
* ``witness_ct3``: ``witness_t3`` applied to the truncation at an even order.
"""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .classify import is_nonnegative, nonnegativity_proof
from .operators import DiffOperator, apply_diff
from .polycore import RatPoly, elementary_symmetric_to_monic, poly_to_json, rat_str
from .roots import RootCertificationError, approx_roots, real_root_separators

__all__ = [
    "Construction",
    "WitnessCertificate",
    "WitnessError",
    "GlTable",
    "gl_table",
    "b_from_a",
    "w_from_u",
    "find_x0",
    "witness_t1",
    "witness_t2",
    "witness_t3",
    "witness_ct3",
    "witness_auto",
    "verify_certificate",
]

PERTURB_RETRIES = 64
PRECISION_DOUBLINGS = 8
START_ROUND_BITS = 32


class Construction(str, enum.Enum):
    T1 = "T1"
    T2 = "T2"
    T3 = "T3"
    CT3 = "CT3_restriction"


class WitnessError(RuntimeError):
    def __init__(self, message: str, diagnostics: dict | None = None, exhausted: bool = False):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
        self.exhausted = exhausted


@dataclass(frozen=True)
class WitnessCertificate:
    p: RatPoly
    x0: Fraction
    value: Fraction
    degree_used: int
    construction: Construction
    nonneg_proof: dict
    details: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> dict:
        return {
            "p": poly_to_json(self.p),
            "x0": rat_str(self.x0),
            "value": rat_str(self.value),
            "degree_used": self.degree_used,
            "construction": self.construction.value,
            "nonneg_proof": self.nonneg_proof,
            "details": self.details,
        }


def verify_certificate(U: DiffOperator, cert: WitnessCertificate) -> bool:
    """Recompute non-negativity of ``p`` and the image value from scratch."""
    if not is_nonnegative(cert.p):
        return False
    value = apply_diff(U, cert.p)(cert.x0)
    return value == cert.value and value < 0


def _certify(U: DiffOperator, p: RatPoly, x0: Fraction, construction: Construction,
             details: dict) -> WitnessCertificate | None:
    value = apply_diff(U, p)(x0)
    if value >= 0 or not is_nonnegative(p):
        return None
    degree = 0 if p.is_zero else int(p.degree)
    return WitnessCertificate(p, x0, value, degree, construction, nonnegativity_proof(p), details)


# --------------------------------------------------------------------------
# the correction polynomials g_l


@dataclass(frozen=True)
class GlTable:
    """``g_l(u_1..u_{l-1}) = sum c * u_i * u_j`` over ``i <= j``, ``i + j = l``.

    ``terms[l-1]`` lists ``(i, j, c)``; ``c`` already sums the two ordered
    Leibniz contributions ``binom(l, i) i! j!`` when ``i != j``.
    """

    k: int
    terms: tuple[tuple[tuple[int, int, int], ...], ...]

    def g(self, l: int, u: Sequence[Fraction]) -> Fraction:
        """Evaluate ``g_l``; ``u[0]`` is ``u_1``."""
        return sum((c * u[i - 1] * u[j - 1] for i, j, c in self.terms[l - 1]), Fraction(0))


def gl_table(k: int) -> GlTable:
    if k < 1:
        raise ValueError("k must be at least 1")
    rows = []
    for l in range(1, k + 1):
        row = []
        for i in range(1, l):
            j = l - i
            if i > j:
                break
            c = math.comb(l, i) * math.factorial(i) * math.factorial(j)
            row.append((i, j, c if i == j else 2 * c))
        rows.append(tuple(row))
    return GlTable(k, tuple(rows))


def b_from_a(a: Sequence[Fraction], table: GlTable) -> list[Fraction]:
    """Solve ``a_l = 2 l! b_l + g_l(b_1..b_{l-1})`` for ``b`` in order.

    The first equation reads ``a_1 = 2 b_1`` since ``g_1 = 0``.
    """
    if len(a) != table.k:
        raise ValueError("len(a) must equal the table order")
    b: list[Fraction] = []
    for l in range(1, table.k + 1):
        b.append((Fraction(a[l - 1]) - table.g(l, b)) / (2 * math.factorial(l)))
    return b


def w_from_u(u: Sequence[Fraction], table: GlTable) -> list[Fraction]:
    return [2 * math.factorial(l) * u[l - 1] + table.g(l, u) for l in range(1, table.k + 1)]


# --------------------------------------------------------------------------
# choice of the evaluation point


def _ladder(limit: int | None = None) -> Iterator[Fraction]:
    n = 1
    while limit is None or n <= limit:
        yield Fraction(n)
        yield Fraction(-n)
        n += 1


def find_x0(U: DiffOperator) -> Fraction:
    """First of ``1, -1, 2, -2, ...`` that is a root of no nonzero ``q_i``."""
    if U.is_zero:
        raise WitnessError("the zero operator has no witness")
    qs = [q for q in U.q if not q.is_zero]
    for x in _ladder():
        if all(q(x) != 0 for q in qs):
            return x
    raise AssertionError("unreachable")  # pragma: no cover


def _negative_point(q: RatPoly) -> Fraction:
    """A rational point where ``q`` is negative (``q`` not non-negative)."""
    cands = [Fraction(0), *_ladder(4)]
    if not q.is_constant():
        cands += real_root_separators(q)
    for x in cands:
        if q(x) < 0:
            return x
    raise AssertionError(f"{q} has no negative value at the sample points")  # pragma: no cover


def _constant_term_witness(U: DiffOperator) -> WitnessCertificate | None:
    q0 = U.coeff(0)
    if is_nonnegative(q0):
        return None
    x0 = _negative_point(q0)
    return _certify(U, RatPoly([1]), x0, Construction.T1, {"path": "constant_term"})


# --------------------------------------------------------------------------
# degree 2k construction


def _round_dyadic(x: Fraction, bits: int) -> Fraction:
    scale = 1 << bits
    return Fraction(round(x * scale), scale)


def _t_factor(z_re: Fraction, z_im: Fraction, x0: Fraction, bits: int | None) -> RatPoly:
    """Real factor of ``p1`` contributed by the root ``z`` (upper half or real):
    ``x - t`` for real ``t``, ``(x - t)(x - conj t)`` otherwise, where
    ``t = x0 - 1/z``."""
    norm = z_re * z_re + z_im * z_im
    t_re = x0 - z_re / norm
    t_im = z_im / norm
    if bits is not None:
        t_re, t_im = _round_dyadic(t_re, bits), _round_dyadic(t_im, bits)
    if z_im == 0:
        return RatPoly([-t_re, 1])
    return RatPoly([t_re * t_re + t_im * t_im, -2 * t_re, 1])


def witness_t1(U: DiffOperator, seed: int = 0) -> WitnessCertificate:
    if U.is_zero:
        raise WitnessError("the zero operator has no witness")
    k = U.order
    if k < 1:
        raise WitnessError("witness_t1 needs an operator of order >= 1")
    quick = _constant_term_witness(U)
    if quick is not None:
        return quick

    x0 = find_x0(U)
    alpha = [U.coeff(i)(x0) for i in range(k + 1)]
    c0 = alpha[0]
    j = max((i for i in range(1, k + 1) if alpha[i] != 0), key=lambda i: (abs(alpha[i]), -i))
    a = [Fraction(0)] * k
    a[j - 1] = -(c0 + 1) / alpha[j]
    table = gl_table(k)
    rng = random.Random(seed)
    diagnostics = {"x0": rat_str(x0), "zero_root_retries": 0, "precision_failures": 0}

    for retry in range(PERTURB_RETRIES):
        b = b_from_a(a, table)
        if b[-1] != 0:
            zpoly = elementary_symmetric_to_monic(b, k)
            bits = START_ROUND_BITS
            for _ in range(PRECISION_DOUBLINGS):
                try:
                    zs = approx_roots(zpoly, Fraction(1, 1 << (bits + 8)))
                except RootCertificationError:
                    diagnostics["precision_failures"] += 1
                    bits *= 2
                    continue
                p1 = RatPoly([1])
                for z in zs:
                    if z.im_center < 0:
                        continue
                    exact = z.radius == 0
                    f = _t_factor(z.re_center, z.im_center, x0, None if exact else bits)
                    p1 = p1 * f ** z.multiplicity
                cert = _certify(
                    U, p1 * p1, x0, Construction.T1,
                    {
                        "a": [rat_str(v) for v in a],
                        "b": [rat_str(v) for v in b],
                        "round_bits": bits,
                        "retry": retry,
                    },
                )
                if cert is not None:
                    return cert
                diagnostics["precision_failures"] += 1
                bits *= 2
        else:
            diagnostics["zero_root_retries"] += 1
        # perturb another coordinate, then restore q0(x0) + sum alpha_i a_i = -1
        others = [i for i in range(1, k + 1) if i != j]
        if others:
            i = rng.choice(others)
            delta = Fraction(rng.randint(1, 16), 256) * rng.choice((-1, 1))
            a[i - 1] += delta
        rest = sum(alpha[i] * a[i - 1] for i in range(1, k + 1) if i != j)
        a[j - 1] = -(c0 + 1 + rest) / alpha[j]
    raise WitnessError("retry budget exhausted in witness_t1", diagnostics, exhausted=True)


# --------------------------------------------------------------------------
# (x - t0)^n constructions


def _g_coeffs(U: DiffOperator, x0: Fraction, n: int, k: int) -> list[Fraction]:
    """Coefficients in ``u`` of ``(U (x-t)^n)(x0) / (x0-t)^n``, ``u = 1/(x0-t)``."""
    return [U.coeff(i)(x0) * math.perm(n, i) for i in range(k + 1)]


def _negative_u(coeffs: list[Fraction], max_exp: int = 4096) -> Fraction | None:
    """Walk ``u = s * 2**m`` along the direction in which the polynomial with
    the given ascending ``coeffs`` eventually goes negative."""
    d = max((i for i, c in enumerate(coeffs) if c != 0), default=-1)
    if d < 1:
        return None
    lead = coeffs[d]
    if d % 2:
        direction = -1 if lead > 0 else 1
    elif lead < 0:
        direction = 1
    else:
        return None
    g = RatPoly(coeffs)
    for m in range(max_exp):
        u = Fraction(direction * (1 << m))
        if g(u) < 0:
            return u
    return None  # pragma: no cover


def _power_witness(U: DiffOperator, x0: Fraction, n: int, construction: Construction,
                   extra: dict) -> WitnessCertificate | None:
    k = U.order
    coeffs = _g_coeffs(U, x0, n, k)
    u0 = _negative_u(coeffs)
    if u0 is None:
        return None
    t0 = x0 - 1 / u0
    p = RatPoly([-t0, 1]) ** n
    return _certify(U, p, x0, construction,
                    {"u0": rat_str(u0), "t0": rat_str(t0), **extra})


def witness_t2(U: DiffOperator) -> WitnessCertificate:
    k = U.order
    if k < 1 or k % 2 == 0:
        raise WitnessError(f"witness_t2 needs odd order, got {k}")
    qk = U.coeff(k)
    x0 = next(x for x in _ladder() if qk(x) != 0)
    cert = _power_witness(U, x0, k + 1, Construction.T2, {})
    if cert is None:  # pragma: no cover - odd degree in u always goes negative
        raise WitnessError("no negative value of g found", {"x0": rat_str(x0)})
    return cert


def _t3_candidates(U: DiffOperator) -> Iterator[Fraction]:
    k = U.order
    qk, qk1 = U.coeff(k), U.coeff(k - 1)
    seen: set[Fraction] = set()

    def fresh(xs):
        for x in xs:
            if x not in seen:
                seen.add(x)
                yield x

    yield from fresh(_ladder(8))
    yield from fresh([Fraction(0)])
    if qk.is_constant():
        return
    seps = real_root_separators(qk)
    yield from fresh(seps)
    yield from fresh(s + d for s in seps for d in (1, -1))
    # exact rational roots of q_k, where the q_{k-1} branch may apply
    if not qk1.is_zero:
        den = math.lcm(*(c.denominator for c in qk.coeffs))
        limit = int(abs(qk.leading * den)) or 1
        for z in approx_roots(qk, Fraction(1, 2**64)):
            if z.is_real:
                r = z.re_center.limit_denominator(limit)
                if qk(r) == 0:
                    yield from fresh([r])


def _t3_qualifies(U: DiffOperator, x0: Fraction) -> bool:
    k = U.order
    v = U.coeff(k)(x0)
    return v < 0 or (v == 0 and U.coeff(k - 1)(x0) != 0)


def witness_t3(U: DiffOperator, construction: Construction = Construction.T3) -> WitnessCertificate:
    k = U.order
    if k < 2 or k % 2:
        raise WitnessError(f"witness_t3 needs even order >= 2, got {k}")
    for x0 in _t3_candidates(U):
        if not _t3_qualifies(U, x0):
            continue
        cert = _power_witness(U, x0, k, construction, {})
        if cert is not None:
            return cert
    raise WitnessError(
        "precondition unverifiable: no candidate x0 with q_k(x0) < 0, "
        "or q_k(x0) = 0 and q_{k-1}(x0) != 0",
        {"order": k},
    )


def witness_ct3(U: DiffOperator, i: int | None = None) -> WitnessCertificate:
    """Restrict ``U`` to order ``i`` (even) and run the even-order construction;
    the certificate is checked against ``U`` itself."""
    orders = [i] if i is not None else list(range(2, U.order + 1, 2))
    last: WitnessError | None = None
    for order in orders:
        if order < 2 or order % 2 or order > U.order:
            raise WitnessError(f"restriction order must be even in 2..{U.order}, got {order}")
        V = U.restrict(order)
        if V.order != order:
            continue
        try:
            cert = witness_t3(V, Construction.CT3)
        except WitnessError as exc:
            last = exc
            continue
        if verify_certificate(U, cert):
            return WitnessCertificate(cert.p, cert.x0, cert.value, cert.degree_used,
                                      Construction.CT3, cert.nonneg_proof,
                                      {**cert.details, "restricted_order": order})
    raise last or WitnessError("no even order admits the restricted construction")


def witness_auto(U: DiffOperator, seed: int = 0) -> WitnessCertificate:
    """Smallest-degree construction that applies."""
    if U.is_zero:
        raise WitnessError("the zero operator has no witness")
    quick = _constant_term_witness(U)
    if quick is not None:
        return quick
    k = U.order
    if k % 2:
        return witness_t2(U)
    for attempt in (witness_t3, witness_ct3):
        try:
            return attempt(U)
        except WitnessError:
            pass
    return witness_t1(U, seed=seed)
