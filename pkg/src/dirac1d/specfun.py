"""Generalized Laguerre polynomials, Gauss-Laguerre rules and Kummer's M.

Everything here works on real arguments only.  ``laguerre`` and
``laguerre_derivative`` accept scalars or numpy arrays for ``z``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError, DomainError
from .tridiag import eigvalsh_tridiagonal

MAX_RULE_POINTS = 512


def _check_alpha(alpha):
    if not alpha > -1.0:
        raise DomainError(f"Laguerre order alpha must exceed -1, got {alpha!r}")


def laguerre(n: int, alpha: float, z):
    """Generalized Laguerre polynomial ``L_n^alpha(z)``.

    Uses the upward three-term recurrence

        (k+1) L_{k+1} = (2k + alpha + 1 - z) L_k - (k + alpha) L_{k-1}

    which is stable for the moderate degrees needed here.
    """
    if n < 0:
        raise DomainError(f"degree must be >= 0, got {n}")
    _check_alpha(alpha)
    scalar = np.isscalar(z)
    z = np.asarray(z, dtype=float)
    prev = np.ones_like(z)
    if n == 0:
        return float(prev) if scalar else prev
    cur = alpha + 1.0 - z
    for k in range(1, n):
        prev, cur = cur, ((2 * k + alpha + 1.0 - z) * cur - (k + alpha) * prev) / (k + 1)
    return float(cur) if scalar else cur


def laguerre_derivative(n: int, alpha: float, z):
    """d/dz L_n^alpha(z) = -L_{n-1}^{alpha+1}(z)."""
    _check_alpha(alpha)
    if n < 0:
        raise DomainError(f"degree must be >= 0, got {n}")
    if n == 0:
        return 0.0 if np.isscalar(z) else np.zeros_like(np.asarray(z, dtype=float))
    out = laguerre(n - 1, alpha + 1.0, z)
    return -out


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss rule for weight ``z**alpha * exp(-z)`` on (0, inf).

    ``nodes`` and ``weights`` are read-only arrays.
    """

    alpha: float
    nodes: np.ndarray
    weights: np.ndarray

    def __len__(self):
        return self.nodes.shape[0]

    def integrate(self, f):
        """Approximate the integral of ``z**alpha * exp(-z) * f(z)``."""
        return np.sum(self.weights * f(self.nodes))


def _jacobi_matrix(npts, alpha):
    k = np.arange(npts, dtype=float)
    d = 2.0 * k + alpha + 1.0
    kk = np.arange(1, npts, dtype=float)
    e = np.sqrt(kk * (kk + alpha))
    return d, e


def _orthonormal_sums(npts, alpha, x):
    """Christoffel sums ``sum_k p_k(x)**2`` and the ratio p_n/p_n' at ``x``.

    ``p_k`` are the orthonormal Laguerre polynomials for this weight; the
    recurrence is rescaled on the fly so large nodes cannot overflow.  Both
    returned quantities are scale free up to the common factor, which is
    tracked in ``logscale``.
    """
    d, e = _jacobi_matrix(npts + 1, alpha)
    # p_{-1} = 0, p_0 = 1 / sqrt(Gamma(alpha+1)); carry p_0 = 1 and fold the
    # constant into the final weight.
    pm1 = np.zeros_like(x)
    p = np.ones_like(x)
    dpm1 = np.zeros_like(x)
    dp = np.zeros_like(x)
    total = np.ones_like(x)
    logscale = np.zeros_like(x)
    for k in range(npts):
        # e[k] p_{k+1} = (x - d[k]) p_k - e[k-1] p_{k-1}
        prev_e = e[k - 1] if k > 0 else 0.0
        pn = ((x - d[k]) * p - prev_e * pm1) / e[k]
        dpn = (p + (x - d[k]) * dp - prev_e * dpm1) / e[k]
        pm1, p, dpm1, dp = p, pn, dp, dpn
        if k < npts - 1:
            total = total + p * p
        big = np.abs(p) > 1e100
        if big.any():
            s = np.where(big, 1e-100, 1.0)
            pm1 *= s
            p *= s
            dpm1 *= s
            dp *= s
            total *= s * s
            logscale += np.where(big, 2.0 * math.log(1e100), 0.0)
    return total, logscale, p / dp


@lru_cache(maxsize=64)
def gauss_laguerre(npts: int, alpha: float = 0.0) -> QuadratureRule:
    """Generalized Gauss-Laguerre rule with ``npts`` points.

    Nodes are the eigenvalues of the Jacobi matrix (found by bisection and
    polished with Newton steps on ``L_npts^alpha``); weights come from the
    Christoffel function, i.e. the squared first components of the
    normalized eigenvectors.  Weights smaller than the double-precision
    underflow threshold come out as zero.
    """
    if not 1 <= npts <= MAX_RULE_POINTS:
        raise DomainError(f"npts must be in [1, {MAX_RULE_POINTS}], got {npts}")
    _check_alpha(alpha)
    d, e = _jacobi_matrix(npts, alpha)
    x = eigvalsh_tridiagonal(d, e)
    for _ in range(3):
        _, _, ratio = _orthonormal_sums(npts, alpha, x)
        x = x - ratio
    total, logscale, _ = _orthonormal_sums(npts, alpha, x)
    # weight = Gamma(alpha+1) / sum_k (p_k/p_0)^2
    with np.errstate(under="ignore"):
        w = np.exp(math.lgamma(alpha + 1.0) - np.log(total) - logscale)
    x.setflags(write=False)
    w.setflags(write=False)
    return QuadratureRule(alpha=float(alpha), nodes=x, weights=w)


def kummer_m(a: float, b: float, z: float, tol: float = 1e-14, max_terms: int = 10_000) -> float:
    """Confluent hypergeometric function ``M(a, b, z)`` by its power series.

    Summation stops once a term is below ``tol`` relative to the running
    sum (or the series terminates for non-positive integer ``a``).
    """
    if b <= 0 and float(b).is_integer():
        raise DomainError(f"b must not be a non-positive integer, got {b!r}")
    term = 1.0
    total = 1.0
    for k in range(max_terms):
        term *= (a + k) / (b + k) * z / (k + 1)
        total += term
        if term == 0.0:
            return total
        if abs(term) <= tol * abs(total):
            return total
    raise ConvergenceError(f"Kummer series did not converge in {max_terms} terms")
