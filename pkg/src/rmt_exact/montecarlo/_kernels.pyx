# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: batched cyclic Jacobi and Faddeev-LeVerrier + Sturm counting."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs
from libc.stdlib cimport malloc, free

cnp.import_array()

cdef enum:
    MAX_SWEEPS = 60
    MAX_DEG = 32


cdef inline double _sgn(double x) nogil:
    return 1.0 if x > 0 else (-1.0 if x < 0 else 0.0)


cdef void _jacobi_one(double* a, double* v, Py_ssize_t n, double tol, bint vec) noexcept nogil:
    cdef Py_ssize_t p, q, k, it
    cdef double scale = 0.0, off, apq, theta, t, c, s, x, y
    for k in range(n * n):
        scale += a[k] * a[k]
    scale = sqrt(scale)
    if scale == 0.0:
        scale = 1.0
    for it in range(MAX_SWEEPS):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off += a[p * n + q] * a[p * n + q]
        if sqrt(2.0 * off) <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p * n + q]
                if apq == 0.0:
                    continue
                theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq)
                if theta == 0.0:
                    t = 1.0
                elif fabs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = _sgn(theta) / (fabs(theta) + sqrt(theta * theta + 1.0))
                c = 1.0 / sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    x = a[k * n + p]
                    y = a[k * n + q]
                    a[k * n + p] = c * x - s * y
                    a[k * n + q] = s * x + c * y
                for k in range(n):
                    x = a[p * n + k]
                    y = a[q * n + k]
                    a[p * n + k] = c * x - s * y
                    a[q * n + k] = s * x + c * y
                a[p * n + q] = 0.0
                a[q * n + p] = 0.0
                if vec:
                    for k in range(n):
                        x = v[k * n + p]
                        y = v[k * n + q]
                        v[k * n + p] = c * x - s * y
                        v[k * n + q] = s * x + c * y


def jacobi_eigh_batch(A, double tol=1e-14, bint want_vectors=False):
    """Cyclic Jacobi on a ``(B, n, n)`` stack; see the numpy reference."""
    cdef cnp.ndarray[cnp.float64_t, ndim=3, mode="c"] a = np.array(A, dtype=np.float64, order="C", copy=True)
    cdef Py_ssize_t B = a.shape[0], n = a.shape[1], b, i
    cdef cnp.ndarray[cnp.float64_t, ndim=3, mode="c"] V
    if want_vectors:
        V = np.ascontiguousarray(np.broadcast_to(np.eye(n), (B, n, n)))
    else:
        V = np.zeros((1, 1, 1))
    cdef double* ap = <double*> a.data
    cdef double* vp = <double*> V.data
    with nogil:
        for b in range(B):
            _jacobi_one(ap + b * n * n, vp + (b * n * n if want_vectors else 0), n, tol, want_vectors)
    w = np.ascontiguousarray(np.diagonal(a, axis1=1, axis2=2))
    order = np.argsort(w, axis=1, kind="stable")
    w = np.take_along_axis(w, order, axis=1)
    if want_vectors:
        return w, np.take_along_axis(V, order[:, None, :], axis=2)
    return w, None


cdef void _charpoly(const double* a, long double* c, Py_ssize_t n, long double* M, long double* T) noexcept nogil:
    # det(xI - A) = sum c[k] x^(n-k), M_k = A M_{k-1} + c_{k-1} I
    cdef Py_ssize_t i, j, l, k
    cdef long double acc, tr
    for i in range(n * n):
        M[i] = 0
    c[0] = 1
    for k in range(1, n + 1):
        for i in range(n):
            for j in range(n):
                acc = 0
                for l in range(n):
                    acc = acc + (<long double> a[i * n + l]) * M[l * n + j]
                T[i * n + j] = acc
        for i in range(n):
            T[i * n + i] = T[i * n + i] + c[k - 1]
        tr = 0
        for i in range(n):
            for l in range(n):
                tr = tr + (<long double> a[i * n + l]) * T[l * n + i]
        c[k] = -tr / k
        for i in range(n * n):
            M[i] = T[i]


cdef inline long double _ldabs(long double x) noexcept nogil:
    return -x if x < 0 else x


cdef long double _normalize(long double* p, Py_ssize_t len_) noexcept nogil:
    cdef Py_ssize_t i
    cdef long double m = 0
    for i in range(len_):
        if _ldabs(p[i]) > m:
            m = _ldabs(p[i])
    if m > 0:
        for i in range(len_):
            p[i] = p[i] / m
    return m


cdef int _distinct(long double* p, Py_ssize_t n, double tol, long double* gcd, Py_ssize_t* gdeg) noexcept nogil:
    # sequence stored row-wise, row r has length lens[r], descending coefficients
    cdef long double seq[MAX_DEG + 2][MAX_DEG + 1]
    cdef Py_ssize_t lens[MAX_DEG + 2]
    cdef long double num[MAX_DEG + 1]
    cdef Py_ssize_t r, i, j, ln, ld, shift, nseq
    cdef long double f, m
    cdef int vneg = 0, vpos = 0
    cdef double last_neg = 0, last_pos = 0, sp, sn
    gdeg[0] = 0
    for i in range(n + 1):
        seq[0][i] = p[i]
    lens[0] = n + 1
    for i in range(n):
        seq[1][i] = seq[0][i] * (n - i)
    lens[1] = n
    _normalize(seq[1], n)
    nseq = 2
    while lens[nseq - 1] > 1:
        ln = lens[nseq - 2]
        ld = lens[nseq - 1]
        for i in range(ln):
            num[i] = seq[nseq - 2][i]
        shift = 0
        while ln - shift >= ld:
            f = num[shift] / seq[nseq - 1][0]
            for j in range(ld):
                num[shift + j] = num[shift + j] - f * seq[nseq - 1][j]
            shift += 1
        ln = ln - shift
        for i in range(ln):
            seq[nseq][i] = -num[shift + i]
        m = _normalize(seq[nseq], ln)
        if m <= tol:
            # exact division: the last entry is gcd(p, p')
            for i in range(ld):
                gcd[i] = seq[nseq - 1][i]
            gdeg[0] = ld - 1
            break
        i = 0
        while i < ln and seq[nseq][i] == 0:
            i += 1
        if i < ln and _ldabs(seq[nseq][i]) <= tol:
            return -1
        for j in range(ln - i):
            seq[nseq][j] = seq[nseq][j + i]
        lens[nseq] = ln - i
        nseq += 1
    for r in range(nseq):
        sp = _sgn(<double> seq[r][0])
        sn = sp if (lens[r] - 1) % 2 == 0 else -sp
        if sp != 0:
            if last_pos != 0 and sp != last_pos:
                vpos += 1
            last_pos = sp
        if sn != 0:
            if last_neg != 0 and sn != last_neg:
                vneg += 1
            last_neg = sn
    return vneg - vpos


cdef int _sturm(long double* c, Py_ssize_t n, double tol) noexcept nogil:
    # real roots with multiplicity: distinct(p) + count(gcd(p, p'))
    cdef long double p[MAX_DEG + 1]
    cdef long double g[MAX_DEG + 1]
    cdef Py_ssize_t i, deg = n, gdeg
    cdef int k, total = 0
    for i in range(n + 1):
        p[i] = c[i]
    while deg > 0:
        _normalize(p, deg + 1)
        k = _distinct(p, deg, tol, g, &gdeg)
        if k < 0:
            return -1
        total += k
        if gdeg == 0:
            break
        for i in range(gdeg + 1):
            p[i] = g[i]
        deg = gdeg
    return total


def charpoly_batch(A):
    """Faddeev-LeVerrier coefficients in ``long double``; shape ``(B, n+1)``."""
    cdef cnp.ndarray[cnp.float64_t, ndim=3, mode="c"] a = np.ascontiguousarray(A, dtype=np.float64)
    cdef Py_ssize_t B = a.shape[0], n = a.shape[1], b
    out = np.zeros((B, n + 1), dtype=np.longdouble)
    cdef long double[:, ::1] ov = out
    cdef long double* M = <long double*> malloc(n * n * sizeof(long double))
    cdef long double* T = <long double*> malloc(n * n * sizeof(long double))
    cdef double* ap = <double*> a.data
    try:
        with nogil:
            for b in range(B):
                _charpoly(ap + b * n * n, &ov[b, 0], n, M, T)
    finally:
        free(M)
        free(T)
    return out


def sturm_count(coeffs, double tol=1e-10):
    """Distinct real roots of a descending-coefficient polynomial; -1 if ambiguous."""
    cdef cnp.ndarray c = np.ascontiguousarray(coeffs, dtype=np.longdouble)
    cdef Py_ssize_t n = c.shape[0] - 1
    if n > MAX_DEG:
        raise ValueError("degree too large")
    cdef long double[::1] cv = c
    return _sturm(&cv[0], n, tol)


def count_real_batch(A, double tol=1e-10):
    """Real-eigenvalue counts for a ``(B, n, n)`` stack (-1 = ambiguous)."""
    cdef cnp.ndarray[cnp.float64_t, ndim=3, mode="c"] a = np.ascontiguousarray(A, dtype=np.float64)
    cdef Py_ssize_t B = a.shape[0], n = a.shape[1], b
    if n > MAX_DEG:
        raise ValueError("matrix too large")
    out = np.empty(B, dtype=np.int64)
    cdef cnp.int64_t[::1] ov = out
    cdef long double c[MAX_DEG + 1]
    cdef long double* M = <long double*> malloc(n * n * sizeof(long double))
    cdef long double* T = <long double*> malloc(n * n * sizeof(long double))
    cdef double* ap = <double*> a.data
    try:
        with nogil:
            for b in range(B):
                _charpoly(ap + b * n * n, c, n, M, T)
                ov[b] = _sturm(c, n, tol)
    finally:
        free(M)
        free(T)
    return out
