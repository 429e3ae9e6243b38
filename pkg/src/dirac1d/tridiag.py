"""Symmetric tridiagonal eigensolver: Sturm bisection plus inverse iteration.

Shared by the finite-difference oracle and the Gauss-Laguerre rule builder.
The inner loops live in :mod:`dirac1d.kernels`.
"""

from __future__ import annotations

import numpy as np

from . import kernels


def _check(d, e):
    d = np.ascontiguousarray(d, dtype=float)
    e = np.ascontiguousarray(e, dtype=float)
    if d.ndim != 1 or e.ndim != 1 or e.shape[0] != max(d.shape[0] - 1, 0):
        raise ValueError("need len(e) == len(d) - 1")
    if d.shape[0] == 0:
        raise ValueError("empty matrix")
    return d, e


def eigvalsh_tridiagonal(d, e, k: int | None = None, start: int = 0) -> np.ndarray:
    """Eigenvalues ``start .. start+k-1`` in ascending order.

    Parameters
    ----------
    d, e : array_like
        Diagonal and off-diagonal of the symmetric tridiagonal matrix.
    k : int, optional
        How many eigenvalues; all remaining ones by default.
    start : int
        Index of the first eigenvalue wanted (0 = smallest).
    """
    d, e = _check(d, e)
    n = d.shape[0]
    if k is None:
        k = n - start
    if start < 0 or k < 0 or start + k > n:
        raise ValueError(f"requested eigenvalues {start}..{start + k - 1} of {n}")
    return kernels.bisect_eigvals(d, e, start, k)


def eigvec_tridiagonal(d, e, lam: float, iters: int = 3, seed: int = 12345) -> np.ndarray:
    """Unit eigenvector for the (converged) eigenvalue ``lam``.

    The sign is fixed so the largest-magnitude component is positive.
    """
    d, e = _check(d, e)
    rng = np.random.default_rng(seed)
    v = rng.uniform(0.5, 1.5, d.shape[0])
    y = kernels.inverse_iteration(d, e, float(lam), v, iters)
    if y[np.argmax(np.abs(y))] < 0:
        y = -y
    return y


def eigh_tridiagonal_lowest(d, e, k: int, iters: int = 3):
    """Lowest ``k`` eigenpairs; vectors are the columns of the second result.

    Vectors of nearly coincident eigenvalues are re-orthogonalised.
    """
    vals = eigvalsh_tridiagonal(d, e, k)
    d, e = _check(d, e)
    vecs = np.empty((d.shape[0], k))
    scale = max(float(np.max(np.abs(d))), 1.0)
    for j, lam in enumerate(vals):
        y = eigvec_tridiagonal(d, e, lam, iters=iters, seed=12345 + j)
        for i in range(j):
            if abs(vals[i] - lam) < 1e-10 * scale:
                y -= np.dot(vecs[:, i], y) * vecs[:, i]
                y /= np.linalg.norm(y)
        vecs[:, j] = y
    return vals, vecs
