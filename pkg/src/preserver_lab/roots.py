"""Real-root counting by Sturm sequences and certified complex root enclosures.

Root approximation runs the Aberth iteration in double precision, refines
each root by Newton steps at doubling working precision (mpmath), and then
certifies every enclosure with exact Gaussian-rational arithmetic: a root of
a degree-``n`` polynomial ``f`` lies within ``n*|f(z)|/|f'(z)|`` of any ``z``,
and ``n`` pairwise disjoint such discs each hold exactly one root.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath.libmp import NoConvergence
import numpy as np

from . import _kernels
from .polycore import RatPoly, derivative, divmod_poly, square_free_decomposition, square_free_part, to_rat

__all__ = [
    "CxRoot",
    "RootCertificationError",
    "sturm_chain",
    "count_real_roots",
    "approx_roots",
    "real_root_separators",
]

DEFAULT_START_BITS = 53
MAX_DOUBLINGS = 10


class RootCertificationError(RuntimeError):
    """Enclosures could not be certified within the precision budget."""


@dataclass(frozen=True)
class CxRoot:
    re_center: Fraction
    im_center: Fraction
    radius: Fraction
    multiplicity: int

    @property
    def is_real(self) -> bool:
        return self.im_center == 0

    def to_json(self) -> dict:
        from .polycore import rat_str

        return {
            "re": rat_str(self.re_center),
            "im": rat_str(self.im_center),
            "radius": rat_str(self.radius),
            "multiplicity": self.multiplicity,
        }


# --------------------------------------------------------------------------
# Sturm


def sturm_chain(p: RatPoly) -> list[RatPoly]:
    """Canonical Sturm sequence ``p, p', -rem(p, p'), ...``.

    Remainders are rescaled by positive constants, which leaves every sign
    pattern unchanged and keeps coefficient growth down.
    """
    if p.is_zero:
        raise ValueError("Sturm chain of the zero polynomial")
    chain = [p]
    d = derivative(p)
    if d.is_zero:
        return chain
    chain.append(d)
    while True:
        r = -divmod_poly(chain[-2], chain[-1])[1]
        if r.is_zero:
            break
        chain.append(r * (1 / abs(r.leading)))
    return chain


def _variations(signs: list[int]) -> int:
    nz = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(nz, nz[1:]) if a != b)


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _distinct_real_roots(f: RatPoly) -> int:
    chain = sturm_chain(f)
    at_pos = [_sign(g.leading) for g in chain]
    at_neg = [_sign(g.leading) * (-1 if g.degree % 2 else 1) for g in chain]
    return _variations(at_neg) - _variations(at_pos)


def count_real_roots(p: RatPoly, with_multiplicity: bool = False) -> int:
    """Number of real roots of ``p`` (distinct, or with multiplicity)."""
    if p.is_zero:
        raise ValueError("the zero polynomial has no finite root count")
    if p.is_constant():
        return 0
    if not with_multiplicity:
        return _distinct_real_roots(square_free_part(p))
    _, factors = square_free_decomposition(p)
    return sum(m * _distinct_real_roots(f) for f, m in factors)


# --------------------------------------------------------------------------
# exact Gaussian-rational helpers


def _cx_eval(f: RatPoly, re: Fraction, im: Fraction) -> tuple[Fraction, Fraction]:
    ar, ai = Fraction(0), Fraction(0)
    for c in reversed(f.coeffs):
        ar, ai = ar * re - ai * im + c, ar * im + ai * re
    return ar, ai


def _sqrt_upper(q: Fraction, bits: int) -> Fraction:
    """A rational ``>= sqrt(q)`` within about ``2**-bits`` of it."""
    if q <= 0:
        return Fraction(0)
    scale = 1 << (2 * bits)
    num = q.numerator * scale
    s = math.isqrt(-(-num // q.denominator))
    return Fraction(s + 1, 1 << bits)


def _mpf_to_frac(x) -> Fraction:
    sign, man, exp, _ = mpmath.mpf(x)._mpf_
    if man == 0:
        return Fraction(0)
    value = Fraction(man << exp) if exp >= 0 else Fraction(man, 1 << -exp)
    return -value if sign else value


def _start_bits() -> int:
    raw = os.environ.get("PRESERVER_LAB_PRECISION")
    if raw:
        try:
            return max(16, int(raw))
        except ValueError:
            pass
    return DEFAULT_START_BITS


# --------------------------------------------------------------------------
# approximation + certification of a square-free factor


def _float_seeds(f: RatPoly) -> list[complex] | None:
    try:
        coeffs = np.array([complex(float(c)) for c in f.coeffs], dtype=np.complex128)
    except OverflowError:
        return None
    if not np.all(np.isfinite(coeffs)):
        return None
    z, _ = _kernels.aberth(coeffs)
    if not np.all(np.isfinite(z)):
        return None
    return [complex(v) for v in z]


def _mp_seeds(f: RatPoly, bits: int) -> list:
    with mpmath.workprec(bits + 32):
        desc = [mpmath.mpf(c.numerator) / c.denominator for c in reversed(f.coeffs)]
        try:
            return list(mpmath.polyroots(desc, maxsteps=400, extraprec=2 * bits, cleanup=True))
        except NoConvergence:
            return list(mpmath.polyroots(desc, maxsteps=2000, extraprec=4 * bits, error=False, cleanup=True))


def _structure(zs: list, n_real: int) -> list[tuple]:
    """Force exactly ``n_real`` real roots and conjugate-symmetric pairs.

    Returns ``(re, im)`` pairs with ``im >= 0``; pairs with ``im > 0`` stand
    for a conjugate pair.
    """
    order = sorted(range(len(zs)), key=lambda i: abs(mpmath.im(zs[i])))
    real_idx = order[:n_real]
    rest = [zs[i] for i in order[n_real:]]
    out = [(mpmath.re(zs[i]), mpmath.mpf(0)) for i in real_idx]
    while rest:
        z = rest.pop(0)
        target = mpmath.conj(z)
        j = min(range(len(rest)), key=lambda t: abs(rest[t] - target))
        w = rest.pop(j)
        re = (mpmath.re(z) + mpmath.re(w)) / 2
        im = (abs(mpmath.im(z)) + abs(mpmath.im(w))) / 2
        out.append((re, im))
    return out


def _newton(f_desc, df_desc, re, im, bits: int, steps: int):
    z = mpmath.mpc(re, im) if im != 0 else mpmath.mpf(re)
    for _ in range(steps):
        fz = mpmath.polyval(f_desc, z)
        dz = mpmath.polyval(df_desc, z)
        if dz == 0:
            break
        step = fz / dz
        z = z - step
        if abs(step) <= abs(z) * mpmath.mpf(2) ** (-bits) + mpmath.mpf(2) ** (-2 * bits):
            break
    if im == 0:
        return mpmath.re(z), mpmath.mpf(0)
    return mpmath.re(z), abs(mpmath.im(z))


def _certify(f: RatPoly, centers: list[tuple[Fraction, Fraction]], bound: Fraction, bits: int):
    """Exact enclosure radii, or ``None`` if certification fails."""
    n = len(f.coeffs) - 1
    df = derivative(f)
    discs: list[tuple[Fraction, Fraction, Fraction]] = []
    for re, im in centers:
        fr, fi = _cx_eval(f, re, im)
        num = fr * fr + fi * fi
        if num == 0:
            r = Fraction(0)
        else:
            dr, di = _cx_eval(df, re, im)
            den = dr * dr + di * di
            if den == 0:
                return None
            r = _sqrt_upper(n * n * num / den, bits + 8)
        if r > bound:
            return None
        discs.append((re, im, r))
        if im != 0:
            discs.append((re, -im, r))
    for i in range(len(discs)):
        ri, ii, rad_i = discs[i]
        for j in range(i + 1, len(discs)):
            rj, ij, rad_j = discs[j]
            gap2 = (ri - rj) ** 2 + (ii - ij) ** 2
            if (rad_i + rad_j) ** 2 >= gap2:
                return None
    return discs


def _roots_square_free(f: RatPoly, bound: Fraction) -> list[tuple[Fraction, Fraction, Fraction]]:
    n = len(f.coeffs) - 1
    if n == 1:
        return [(-f.coeffs[0] / f.coeffs[1], Fraction(0), Fraction(0))]
    n_real = _distinct_real_roots(f)
    bits = _start_bits()
    need = max(bits, bound.denominator.bit_length() - bound.numerator.bit_length() + 8)
    seeds = _float_seeds(f)
    if seeds is None:
        seeds = _mp_seeds(f, bits)
    else:
        seeds = [mpmath.mpc(z.real, z.imag) for z in seeds]
    reseeded = False
    for _ in range(MAX_DOUBLINGS):
        with mpmath.workprec(bits + 16):
            f_desc = [mpmath.mpf(c.numerator) / c.denominator for c in reversed(f.coeffs)]
            df = derivative(f)
            df_desc = [mpmath.mpf(c.numerator) / c.denominator for c in reversed(df.coeffs)]
            structured = _structure(seeds, n_real)
            refined = [_newton(f_desc, df_desc, re, im, bits, 8 + bits // 8) for re, im in structured]
            centers = [(_mpf_to_frac(re), _mpf_to_frac(im)) for re, im in refined]
        if bits >= need:
            discs = _certify(f, centers, bound, bits)
            if discs is not None:
                return discs
            if not reseeded:
                # Newton may have collapsed two seeds onto one root.
                seeds = _mp_seeds(f, 2 * bits)
                reseeded = True
                bits *= 2
                continue
        with mpmath.workprec(bits + 16):
            seeds = []
            for re, im in refined:
                seeds.append(mpmath.mpc(re, im))
                if im != 0:
                    seeds.append(mpmath.mpc(re, -im))
        bits *= 2
    raise RootCertificationError(
        f"could not certify the roots of {f} within radius {bound} (reached {bits} bits)"
    )


def approx_roots(p: RatPoly, radius_bound: Fraction | int | str = Fraction(1, 10**6)) -> list[CxRoot]:
    """Certified enclosures of every root of ``p``, with multiplicities.

    Non-real roots are returned in conjugate pairs with identical radius; the
    list is ordered by ``(re_center, im_center)``.
    """
    bound = to_rat(radius_bound)
    if bound <= 0:
        raise ValueError("radius_bound must be positive")
    if p.is_zero or p.is_constant():
        raise ValueError("approx_roots needs a polynomial of degree >= 1")
    _, factors = square_free_decomposition(p)
    out: list[CxRoot] = []
    for f, m in factors:
        for re, im, r in _roots_square_free(f, bound):
            out.append(CxRoot(re, im, r, m))
    out.sort(key=lambda z: (z.re_center, z.im_center))
    return out


def real_root_separators(p: RatPoly) -> list[Fraction]:
    """Rational points, one in each open interval cut out by the real roots
    of ``p`` (including the two unbounded ones), in increasing order."""
    if p.is_zero:
        raise ValueError("zero polynomial")
    if p.is_constant() or count_real_roots(p) == 0:
        return [Fraction(0)]
    reals = [z for z in approx_roots(square_free_part(p), Fraction(1, 2**20)) if z.is_real]
    pts = [reals[0].re_center - reals[0].radius - 1]
    for a, b in zip(reals, reals[1:]):
        lo = a.re_center + a.radius
        hi = b.re_center - b.radius
        pts.append((lo + hi) / 2)
    pts.append(reals[-1].re_center + reals[-1].radius + 1)
    return pts
