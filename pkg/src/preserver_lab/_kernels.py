"""Floating-point inner loops: simultaneous root iteration and grid evaluation.

Both kernels exist twice, as numba ``@njit`` functions and as vectorised
numpy code.  The numba path is used when numba imports cleanly and the
environment variable ``PRESERVER_LAB_NO_NUMBA`` is unset (or ``0``).  Results
from these kernels are only ever starting points or sampling oracles; the exact
layer re-certifies everything they produce.
"""

from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("PRESERVER_LAB_NO_NUMBA", "0") not in ("", "0")

try:
    if _DISABLED:
        raise ImportError("numba disabled by PRESERVER_LAB_NO_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - depends on environment
    HAVE_NUMBA = False


def backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"


def initial_guesses(coeffs: np.ndarray) -> np.ndarray:
    """Points on a circle of the Fujiwara radius, offset off the real axis.

    ``coeffs`` are complex, ascending degree, monic.
    """
    n = coeffs.shape[0] - 1
    mags = np.abs(coeffs[:-1])
    k = np.arange(n, 0, -1)
    radius = 2.0 * np.max(mags ** (1.0 / k)) if n else 1.0
    if not np.isfinite(radius) or radius == 0.0:
        radius = 1.0
    angles = 2.0 * np.pi * np.arange(n) / n + 0.4
    return radius * np.exp(1j * angles)


# --------------------------------------------------------------------------
# numpy implementations


def _aberth_numpy(coeffs, z0, maxiter, tol):
    z = z0.copy()
    n = z.shape[0]
    dcoeffs = coeffs[1:] * np.arange(1, n + 1)
    for it in range(maxiter):
        pv = np.polyval(coeffs[::-1], z)
        dv = np.polyval(dcoeffs[::-1], z)
        ratio = pv / dv
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        inv = 1.0 / diff
        np.fill_diagonal(inv, 0.0)
        s = inv.sum(axis=1)
        step = ratio / (1.0 - ratio * s)
        z = z - step
        if np.all(np.abs(step) <= tol * (1.0 + np.abs(z))):
            return z, it + 1
    return z, maxiter


def _horner_grid_numpy(coeffs, xs):
    out = np.zeros_like(xs)
    for c in coeffs[::-1]:
        out = out * xs + c
    return out


# --------------------------------------------------------------------------
# numba implementations

if HAVE_NUMBA:

    @njit(cache=True)
    def _aberth_numba(coeffs, z0, maxiter, tol):  # pragma: no cover - jitted
        z = z0.copy()
        n = z.shape[0]
        for it in range(maxiter):
            converged = True
            for i in range(n):
                zi = z[i]
                pv = coeffs[n]
                dv = 0.0 + 0.0j
                for j in range(n - 1, -1, -1):
                    dv = dv * zi + pv
                    pv = pv * zi + coeffs[j]
                ratio = pv / dv
                s = 0.0 + 0.0j
                for j in range(n):
                    if j != i:
                        s += 1.0 / (zi - z[j])
                step = ratio / (1.0 - ratio * s)
                z[i] = zi - step
                if abs(step) > tol * (1.0 + abs(z[i])):
                    converged = False
            if converged:
                return z, it + 1
        return z, maxiter

    @njit(cache=True)
    def _horner_grid_numba(coeffs, xs):  # pragma: no cover - jitted
        out = np.empty_like(xs)
        m = coeffs.shape[0]
        for k in range(xs.shape[0]):
            x = xs[k]
            acc = 0.0
            for j in range(m - 1, -1, -1):
                acc = acc * x + coeffs[j]
            out[k] = acc
        return out


def aberth(coeffs, z0=None, maxiter: int = 500, tol: float = 1e-15, use_numba=None):
    """Aberth-Ehrlich iteration on a monic polynomial.

    ``coeffs`` ascending degree, complex128, ``coeffs[-1] == 1``.  Returns
    ``(roots, iterations)``.
    """
    coeffs = np.ascontiguousarray(coeffs, dtype=np.complex128)
    if z0 is None:
        z0 = initial_guesses(coeffs)
    z0 = np.ascontiguousarray(z0, dtype=np.complex128)
    jit = HAVE_NUMBA if use_numba is None else (use_numba and HAVE_NUMBA)
    if jit:
        return _aberth_numba(coeffs, z0, maxiter, tol)
    return _aberth_numpy(coeffs, z0, maxiter, tol)


def horner_grid(coeffs, xs, use_numba=None) -> np.ndarray:
    """Evaluate a real polynomial (ascending float coefficients) on a grid."""
    coeffs = np.ascontiguousarray(coeffs, dtype=np.float64)
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    jit = HAVE_NUMBA if use_numba is None else (use_numba and HAVE_NUMBA)
    if jit:
        return _horner_grid_numba(coeffs, xs)
    return _horner_grid_numpy(coeffs, xs)
