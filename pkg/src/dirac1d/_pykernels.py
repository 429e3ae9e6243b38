"""Pure-Python tridiagonal kernels.

Mirrors ``_ckernels.pyx`` operation for operation so both backends produce
the same floating-point results.  Used when the compiled extension is not
available or when ``DIRAC1D_PURE_PYTHON`` is set.
"""

import math

import numpy as np

EPS = np.finfo(float).eps
MAXIT = 256

# above this many requested eigenvalues the shift-vectorised Sturm count wins
_VECTORISE_ABOVE = 8


def sturm_count(d, e2, x, pivmin):
    """Number of eigenvalues of the symmetric tridiagonal matrix below ``x``.

    ``e2`` holds the squared off-diagonal.
    """
    count = 0
    qv = 1.0
    for i in range(len(d)):
        if i == 0:
            qv = d[0] - x
        else:
            qv = d[i] - x - e2[i - 1] / qv
        if abs(qv) < pivmin:
            qv = -pivmin
        if qv < 0.0:
            count += 1
    return count


def _sturm_count_many(d, e2, xs, pivmin):
    qv = d[0] - xs
    qv = np.where(np.abs(qv) < pivmin, -pivmin, qv)
    count = (qv < 0.0).astype(np.int64)
    for i in range(1, len(d)):
        qv = d[i] - xs - e2[i - 1] / qv
        qv = np.where(np.abs(qv) < pivmin, -pivmin, qv)
        count += qv < 0.0
    return count


def bisect_eigvals(d, e, ilo, k):
    """Eigenvalues with indices ``ilo .. ilo+k-1`` (ascending) by bisection."""
    d = np.ascontiguousarray(d, dtype=float)
    e = np.ascontiguousarray(e, dtype=float)
    e2 = e * e
    glo, ghi, tnorm, pivmin = _bounds(d, e)
    abstol = 2.0 * EPS * tnorm
    if k > _VECTORISE_ABOVE:
        return _bisect_vectorised(d, e2, ilo, k, glo, ghi, abstol, pivmin)
    dl = d.tolist()
    e2l = e2.tolist()
    out = np.empty(k)
    for j in range(k):
        target = ilo + j
        lo, hi = glo, ghi
        for _ in range(MAXIT):
            width = hi - lo
            if width <= max(abstol, 2.0 * EPS * max(abs(lo), abs(hi))):
                break
            mid = 0.5 * (lo + hi)
            if sturm_count(dl, e2l, mid, pivmin) > target:
                hi = mid
            else:
                lo = mid
        out[j] = 0.5 * (lo + hi)
    return out


def _bisect_vectorised(d, e2, ilo, k, glo, ghi, abstol, pivmin):
    targets = np.arange(ilo, ilo + k)
    lo = np.full(k, glo)
    hi = np.full(k, ghi)
    for _ in range(MAXIT):
        tol = np.maximum(abstol, 2.0 * EPS * np.maximum(np.abs(lo), np.abs(hi)))
        active = (hi - lo) > tol
        if not active.any():
            break
        mid = 0.5 * (lo[active] + hi[active])
        cnt = _sturm_count_many(d, e2, mid, pivmin)
        up = cnt > targets[active]
        h = hi[active]
        l_ = lo[active]
        h[up] = mid[up]
        l_[~up] = mid[~up]
        hi[active] = h
        lo[active] = l_
    return 0.5 * (lo + hi)


def _bounds(d, e):
    n = d.shape[0]
    r = np.zeros(n)
    if n > 1:
        ae = np.abs(e)
        r[:-1] += ae
        r[1:] += ae
    glo = float(np.min(d - r))
    ghi = float(np.max(d + r))
    tnorm = max(abs(glo), abs(ghi))
    if tnorm == 0.0:
        tnorm = 1.0
    # widen slightly so the extreme eigenvalues lie strictly inside
    pad = 2.0 * EPS * tnorm * n + 2.0 * EPS * tnorm
    e2max = float(np.max(e * e)) if n > 1 else 0.0
    pivmin = np.finfo(float).tiny * max(1.0, e2max)
    return glo - pad, ghi + pad, tnorm, pivmin


def inverse_iteration(d, e, lam, v, iters):
    """Eigenvector of the tridiagonal matrix for eigenvalue ``lam``.

    Solves ``(T - lam I) y = v`` with partial pivoting ``iters`` times,
    normalising after each solve.  ``v`` is the start vector.
    """
    d = np.asarray(d, dtype=float)
    e = np.asarray(e, dtype=float)
    n = d.shape[0]
    tnorm = float(np.max(np.abs(d)) + 2.0 * (np.max(np.abs(e)) if n > 1 else 0.0))
    tiny_piv = EPS * tnorm
    y = np.array(v, dtype=float)
    for _ in range(iters):
        y = _solve_shifted(d.tolist(), e.tolist(), lam, y.tolist(), tiny_piv)
        y = np.asarray(y)
        nrm = math.sqrt(float(np.dot(y, y)))
        y /= nrm
    return y


def _solve_shifted(d, e, lam, b, tiny_piv):
    # Gaussian elimination with partial pivoting on T - lam*I (dgtsv layout)
    n = len(d)
    diag = [d[i] - lam for i in range(n)]
    du = list(e) + [0.0]
    dl = list(e)
    du2 = [0.0] * n
    for i in range(n - 1):
        if abs(diag[i]) >= abs(dl[i]):
            if diag[i] == 0.0:
                diag[i] = tiny_piv
            fact = dl[i] / diag[i]
            diag[i + 1] -= fact * du[i]
            b[i + 1] -= fact * b[i]
            dl[i] = 0.0
        else:
            fact = diag[i] / dl[i]
            diag[i] = dl[i]
            tmp = diag[i + 1]
            diag[i + 1] = du[i] - fact * tmp
            du2[i] = du[i + 1]
            du[i + 1] = -fact * du[i + 1]
            du[i] = tmp
            tmp = b[i]
            b[i] = b[i + 1]
            b[i + 1] = tmp - fact * b[i + 1]
    if abs(diag[n - 1]) < tiny_piv:
        diag[n - 1] = tiny_piv if diag[n - 1] >= 0.0 else -tiny_piv
    for i in range(n - 1):
        if abs(diag[i]) < tiny_piv:
            diag[i] = tiny_piv if diag[i] >= 0.0 else -tiny_piv
    x = [0.0] * n
    x[n - 1] = b[n - 1] / diag[n - 1]
    if n > 1:
        x[n - 2] = (b[n - 2] - du[n - 2] * x[n - 1]) / diag[n - 2]
    for i in range(n - 3, -1, -1):
        x[i] = (b[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / diag[i]
    return x
