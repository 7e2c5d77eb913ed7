"""Pure numpy versions of the compiled kernels.

Same signatures and results as ``_kernels``; used when the extension is not
built, and as its reference in tests and benchmarks.
"""

from __future__ import annotations

import numpy as np

__all__ = ["jacobi_eigh_batch", "charpoly_batch", "sturm_count", "count_real_batch"]

MAX_SWEEPS = 60


def jacobi_eigh_batch(A, tol: float = 1e-14, want_vectors: bool = False):
    """Cyclic Jacobi on a stack of real symmetric matrices.

    Parameters
    ----------
    A : ndarray, shape (B, n, n)
    tol : float
        Sweeps stop once the off-diagonal Frobenius norm is below
        ``tol * ||A||_F`` for every matrix.
    want_vectors : bool

    Returns
    -------
    w : ndarray, shape (B, n)
        Ascending eigenvalues.
    V : ndarray, shape (B, n, n) or None
        Columns are eigenvectors.
    """
    a = np.array(A, dtype=np.float64, copy=True)
    B, n, _ = a.shape
    V = np.broadcast_to(np.eye(n), (B, n, n)).copy() if want_vectors else None
    scale = np.sqrt((a * a).sum(axis=(1, 2)))
    thresh = tol * np.where(scale > 0, scale, 1.0)
    iu = np.triu_indices(n, 1)
    for _ in range(MAX_SWEEPS):
        off = np.sqrt(2.0 * (a[:, iu[0], iu[1]] ** 2).sum(axis=1))
        if np.all(off <= thresh):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[:, p, q]
                active = np.abs(apq) > 0
                if not active.any():
                    continue
                safe = np.where(active, apq, 1.0)
                theta = (a[:, q, q] - a[:, p, p]) / (2.0 * safe)
                big = np.abs(theta) > 1e150
                th = np.where(big, 1.0, theta)
                t = np.sign(th) / (np.abs(th) + np.sqrt(th * th + 1.0))
                t = np.where(big, 0.5 / np.where(big, theta, 1.0), t)
                t = np.where(theta == 0, 1.0, t)
                t = np.where(active, t, 0.0)
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                cc, ss = c[:, None], s[:, None]
                # columns p, q then rows p, q
                ap, aq = a[:, :, p].copy(), a[:, :, q].copy()
                a[:, :, p] = cc * ap - ss * aq
                a[:, :, q] = ss * ap + cc * aq
                ap, aq = a[:, p, :].copy(), a[:, q, :].copy()
                a[:, p, :] = cc * ap - ss * aq
                a[:, q, :] = ss * ap + cc * aq
                a[:, p, q] = 0.0
                a[:, q, p] = 0.0
                if want_vectors:
                    vp, vq = V[:, :, p].copy(), V[:, :, q].copy()
                    V[:, :, p] = cc * vp - ss * vq
                    V[:, :, q] = ss * vp + cc * vq
    w = np.diagonal(a, axis1=1, axis2=2).copy()
    order = np.argsort(w, axis=1, kind="stable")
    w = np.take_along_axis(w, order, axis=1)
    if want_vectors:
        V = np.take_along_axis(V, order[:, None, :], axis=2)
    return w, V


def charpoly_batch(A):
    """Characteristic polynomials by Faddeev-LeVerrier in extended precision.

    Returns
    -------
    ndarray, shape (B, n+1), dtype longdouble
        Coefficients ``c[0] = 1, c[1], ..., c[n]`` of
        ``det(x I - A) = sum_k c[k] x^(n-k)``.
    """
    a = np.asarray(A, dtype=np.longdouble)
    B, n, _ = a.shape
    c = np.zeros((B, n + 1), dtype=np.longdouble)
    c[:, 0] = 1
    M = np.zeros_like(a)
    eye = np.eye(n, dtype=np.longdouble)
    for k in range(1, n + 1):
        M = a @ M + c[:, k - 1][:, None, None] * eye
        c[:, k] = -np.einsum("bij,bji->b", a, M) / k
    return c


def _strip(p, tol_abs):
    """Drop leading coefficients; returns (poly, ambiguous)."""
    i = 0
    while i < len(p) and p[i] == 0:
        i += 1
    p = p[i:]
    if len(p) and abs(p[0]) <= tol_abs:
        return p, True
    return p, False


def _rem(num, den):
    num = list(num)
    dn = len(den) - 1
    while len(num) - 1 >= dn and len(num):
        f = num[0] / den[0]
        for j in range(len(den)):
            num[j] -= f * den[j]
        num.pop(0)
    return np.array(num, dtype=np.longdouble)


def _sign_changes(signs):
    s = [x for x in signs if x != 0]
    return sum(1 for u, v in zip(s, s[1:]) if u != v)


def _distinct(p0, tol):
    """Sturm count of distinct real roots of normalized ``p0``.

    Returns ``(count, gcd)`` with ``gcd`` the repeated-root factor (or None),
    or ``(-1, None)`` when ambiguous.
    """
    deg = len(p0) - 1
    p1 = p0[:-1] * np.arange(deg, 0, -1, dtype=np.longdouble)
    p1 = p1 / np.max(np.abs(p1))
    seq = [p0, p1]
    gcd = None
    while len(seq[-1]) > 1:
        r = -_rem(seq[-2], seq[-1])
        m = np.max(np.abs(r)) if len(r) else 0
        if m <= tol:
            # exact division: the last entry is gcd(p, p')
            gcd = seq[-1]
            break
        r, amb = _strip(r / m, tol)
        if amb:
            return -1, None
        seq.append(r)
    at_pos = [np.sign(p[0]) for p in seq]
    at_neg = [np.sign(p[0]) * (-1) ** (len(p) - 1) for p in seq]
    return _sign_changes(at_neg) - _sign_changes(at_pos), gcd


def sturm_count(coeffs, tol: float = 1e-10) -> int:
    """Number of real roots counted with multiplicity, or -1 if ambiguous.

    ``coeffs`` are in descending order. Remainders are scaled to unit
    max-norm; a remainder below ``tol`` is taken as exact division (repeated
    roots, counted by recursing on the gcd) and a leading coefficient below
    ``tol`` makes the sequence ambiguous.
    """
    p = np.array(coeffs, dtype=np.longdouble)
    total = 0
    while len(p) > 1:
        p = p / np.max(np.abs(p))
        k, gcd = _distinct(p, tol)
        if k < 0:
            return -1
        total += k
        if gcd is None:
            break
        p = gcd
    return total


def count_real_batch(A, tol: float = 1e-10):
    """Real-eigenvalue counts for a stack of real square matrices (-1 = ambiguous)."""
    C = charpoly_batch(A)
    return np.array([sturm_count(c, tol) for c in C], dtype=np.int64)
