# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled tridiagonal kernels; see ``_pykernels`` for the reference version."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, sqrt

cnp.import_array()

from ._pykernels import _bounds, EPS, MAXIT


cdef Py_ssize_t _count(const double[::1] d, const double[::1] e2, double x,
                       double pivmin) noexcept nogil:
    cdef Py_ssize_t i, n = d.shape[0], count = 0
    cdef double qv = 1.0
    for i in range(n):
        if i == 0:
            qv = d[0] - x
        else:
            qv = d[i] - x - e2[i - 1] / qv
        if fabs(qv) < pivmin:
            qv = -pivmin
        if qv < 0.0:
            count += 1
    return count


def sturm_count(d, e2, double x, double pivmin):
    cdef const double[::1] dv = np.ascontiguousarray(d, dtype=float)
    cdef const double[::1] ev = np.ascontiguousarray(e2, dtype=float)
    return _count(dv, ev, x, pivmin)


def bisect_eigvals(d, e, Py_ssize_t ilo, Py_ssize_t k):
    d = np.ascontiguousarray(d, dtype=float)
    e = np.ascontiguousarray(e, dtype=float)
    e2a = np.ascontiguousarray(e * e)
    glo_, ghi_, tnorm_, pivmin_ = _bounds(d, e)
    cdef double glo = glo_, ghi = ghi_, pivmin = pivmin_
    cdef double abstol = 2.0 * EPS * tnorm_, eps = EPS
    cdef const double[::1] dv = d
    cdef const double[::1] ev = e2a
    out = np.empty(k)
    cdef double[::1] ov = out
    cdef Py_ssize_t j, it, target, maxit = MAXIT
    cdef double lo, hi, mid, width, tol
    with nogil:
        for j in range(k):
            target = ilo + j
            lo = glo
            hi = ghi
            for it in range(maxit):
                width = hi - lo
                tol = 2.0 * eps * (fabs(lo) if fabs(lo) > fabs(hi) else fabs(hi))
                if tol < abstol:
                    tol = abstol
                if width <= tol:
                    break
                mid = 0.5 * (lo + hi)
                if _count(dv, ev, mid, pivmin) > target:
                    hi = mid
                else:
                    lo = mid
            ov[j] = 0.5 * (lo + hi)
    return out


cdef void _solve_shifted(const double[::1] d, const double[::1] e, double lam,
                         double[::1] b, double tiny_piv, double[::1] diag,
                         double[::1] du, double[::1] dl, double[::1] du2,
                         double[::1] x) noexcept nogil:
    cdef Py_ssize_t i, n = d.shape[0]
    cdef double fact, tmp
    for i in range(n):
        diag[i] = d[i] - lam
        du2[i] = 0.0
        if i < n - 1:
            du[i] = e[i]
            dl[i] = e[i]
    du[n - 1] = 0.0
    for i in range(n - 1):
        if fabs(diag[i]) >= fabs(dl[i]):
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
    if fabs(diag[n - 1]) < tiny_piv:
        diag[n - 1] = tiny_piv if diag[n - 1] >= 0.0 else -tiny_piv
    for i in range(n - 1):
        if fabs(diag[i]) < tiny_piv:
            diag[i] = tiny_piv if diag[i] >= 0.0 else -tiny_piv
    x[n - 1] = b[n - 1] / diag[n - 1]
    if n > 1:
        x[n - 2] = (b[n - 2] - du[n - 2] * x[n - 1]) / diag[n - 2]
    i = n - 3
    while i >= 0:
        x[i] = (b[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / diag[i]
        i -= 1


def inverse_iteration(d, e, double lam, v, Py_ssize_t iters):
    d = np.ascontiguousarray(d, dtype=float)
    e = np.ascontiguousarray(e, dtype=float)
    cdef Py_ssize_t n = d.shape[0], it, i
    tnorm = float(np.max(np.abs(d)) + 2.0 * (np.max(np.abs(e)) if n > 1 else 0.0))
    cdef double tiny_piv = EPS * tnorm
    cdef const double[::1] dv = d
    cdef const double[::1] ev = np.ascontiguousarray(np.append(e, 0.0))
    y = np.array(v, dtype=float)
    work = np.empty((5, n))
    cdef double[::1] yv = y
    cdef double[::1] diag = work[0], du = work[1], dl = work[2], du2 = work[3], x = work[4]
    cdef double s
    with nogil:
        for it in range(iters):
            _solve_shifted(dv, ev, lam, yv, tiny_piv, diag, du, dl, du2, x)
            s = 0.0
            for i in range(n):
                s += x[i] * x[i]
            s = sqrt(s)
            for i in range(n):
                yv[i] = x[i] / s
    return y
