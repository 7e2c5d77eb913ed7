"""Small dense Hermitian eigensolver (cyclic Jacobi)."""

from __future__ import annotations

import numpy as np

from ..errors import NotHermitian
from ._backend import kernels

__all__ = ["hermitian_eigen", "eigvalsh_batch", "real_embedding"]


def real_embedding(H: np.ndarray) -> np.ndarray:
    """``[[Re H, -Im H], [Im H, Re H]]``; each eigenvalue of ``H`` appears twice."""
    re, im = H.real, H.imag
    top = np.concatenate([re, -im], axis=-1)
    bot = np.concatenate([im, re], axis=-1)
    return np.concatenate([top, bot], axis=-2)


def _check(M, tol):
    scale = max(float(np.abs(M).max(initial=0.0)), 1.0)
    if np.abs(M - np.conj(np.swapaxes(M, -1, -2))).max(initial=0.0) > tol * scale * 1e4:
        raise NotHermitian("matrix is not Hermitian within tolerance")


def eigvalsh_batch(M: np.ndarray, tol: float = 1e-14, want_vectors: bool = False):
    """Ascending eigenvalues (and vectors) of a ``(B, n, n)`` Hermitian stack."""
    M = np.asarray(M)
    if M.ndim == 2:
        M = M[None]
    _check(M, tol)
    if not np.iscomplexobj(M) or not np.any(M.imag):
        w, V = kernels.jacobi_eigh_batch(np.ascontiguousarray(M.real), tol, want_vectors)
        return (w, V) if want_vectors else w
    n = M.shape[-1]
    w, V = kernels.jacobi_eigh_batch(real_embedding(M), tol, want_vectors)
    w = w[:, ::2]
    if not want_vectors:
        return w
    # a column (x; y) of a pair gives x + i y, a unit eigenvector of H
    # (distinct eigenvalues assumed, which holds almost surely for samples)
    return w, V[:, :n, ::2] + 1j * V[:, n:, ::2]


def hermitian_eigen(M, tol: float = 1e-14, vectors: bool = False):
    """Eigenvalues of a single Hermitian or real symmetric matrix.

    Parameters
    ----------
    M : array_like, shape (n, n)
    tol : float
        Off-diagonal stopping threshold relative to ``||M||_F``.
    vectors : bool
        Also return orthonormal eigenvectors as columns.

    Raises
    ------
    NotHermitian

    Examples
    --------
    >>> hermitian_eigen([[0.0, 1.0], [1.0, 0.0]]).tolist()
    [-1.0, 1.0]
    """
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise NotHermitian("expected a square matrix")
    out = eigvalsh_batch(M, tol, vectors)
    if vectors:
        return out[0][0], out[1][0]
    return out[0]
