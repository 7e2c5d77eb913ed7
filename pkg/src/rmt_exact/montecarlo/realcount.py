"""Real-eigenvalue counting via characteristic polynomials and Sturm sequences."""

from __future__ import annotations

import numpy as np

from ..errors import IllConditioned, ValidationError
from ._backend import kernels

__all__ = ["count_real_eigs", "count_real_batch", "charpoly"]

MAX_N = 8


def charpoly(M) -> np.ndarray:
    """Descending ``det(xI - M)`` coefficients in extended precision."""
    M = np.asarray(M, dtype=float)
    return kernels.charpoly_batch(M[None])[0]


def count_real_batch(M, tol: float = 1e-10) -> np.ndarray:
    """Counts for a ``(B, N, N)`` stack; ``-1`` flags ambiguous samples."""
    M = np.asarray(M, dtype=float)
    if M.shape[-1] > MAX_N:
        raise ValidationError(f"N <= {MAX_N} required, got {M.shape[-1]}")
    counts = kernels.count_real_batch(np.ascontiguousarray(M), tol)
    N = M.shape[-1]
    # complex roots come in pairs
    counts[(counts >= 0) & ((N - counts) % 2 != 0)] = -1
    return counts


def count_real_eigs(M, tol: float = 1e-10) -> int:
    """Number of real eigenvalues of a real square matrix.

    Raises
    ------
    IllConditioned
        When the Sturm sequence cannot be resolved at ``tol``.

    Examples
    --------
    >>> count_real_eigs([[0.0, -1.0], [1.0, 0.0]])
    0
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValidationError("expected a square matrix")
    c = int(count_real_batch(M[None], tol)[0])
    if c < 0:
        raise IllConditioned("Sturm signs are ambiguous at this tolerance")
    return c
