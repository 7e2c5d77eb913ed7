"""Matrix samplers for every ensemble used by the exact modules.

Every sampler is batched: ``sample_batch(family, params, rng, count)``
returns a stack of ``count`` independent samples. ``sample_ensemble`` is the
single-sample convenience wrapper.
"""

from __future__ import annotations

import enum

import numpy as np

from ..crossover import CrossoverParams
from ..errors import UnsupportedFamily, ValidationError
from ..fixedtrace import BipartiteDims
from ..meijerg import ProductSpec
from ..recursion import EnsembleParams
from .rng import RngStream

__all__ = [
    "Family",
    "sample_ensemble",
    "sample_batch",
    "haar_unitary",
    "haar_orthogonal",
    "goe",
    "gue",
    "crossover_matrix",
    "bh_unitary",
]


class Family(str, enum.Enum):
    REAL_GINIBRE = "realGinibre"
    COMPLEX_GINIBRE = "complexGinibre"
    GOE = "GOE"
    GUE = "GUE"
    HAAR_UNITARY = "haarUnitary"
    HAAR_ORTHOGONAL = "haarOrthogonal"
    TRUNCATED_ORTHOGONAL = "truncatedOrthogonal"
    FIXED_TRACE_HS = "fixedTraceHS"
    FIXED_TRACE_BH = "fixedTraceBH"
    SCATTERING_BLOCK = "scatteringBlock"
    CROSSOVER = "crossover"


def _size(params) -> int:
    if isinstance(params, (int, np.integer)):
        return int(params)
    N = getattr(params, "N", None)
    if N is None:
        raise ValidationError(f"cannot read a matrix size from {params!r}")
    return int(N)


# -- Gaussian and Haar building blocks ---------------------------------------

def goe(rng: RngStream, count: int, N: int) -> np.ndarray:
    """``(X + X^T)/2``; density proportional to ``exp(-Tr A^2 / 2)``."""
    X = rng.normal((count, N, N))
    return (X + np.swapaxes(X, 1, 2)) / 2


def gue(rng: RngStream, count: int, N: int) -> np.ndarray:
    """``(Z + Z^dagger)/2`` with ``E|Z_ij|^2 = 1``; density ``exp(-Tr B^2)``."""
    Z = rng.complex_normal((count, N, N))
    return (Z + np.conj(np.swapaxes(Z, 1, 2))) / 2


def _qr_haar(Z: np.ndarray) -> np.ndarray:
    Q, R = np.linalg.qr(Z)
    d = np.diagonal(R, axis1=1, axis2=2)
    ph = d / np.abs(d)
    return Q * ph[:, None, :]


def haar_unitary(rng: RngStream, count: int, N: int) -> np.ndarray:
    return _qr_haar(rng.complex_normal((count, N, N)))


def haar_orthogonal(rng: RngStream, count: int, N: int) -> np.ndarray:
    return _qr_haar(rng.normal((count, N, N)))


def crossover_matrix(rng: RngStream, count: int, params: CrossoverParams) -> np.ndarray:
    """``sqrt((1 - alpha^2)/2) A + alpha B`` with ``A`` GOE and ``B`` GUE."""
    N = params.N if params.N is not None else 3
    a = params.alpha
    return np.sqrt((1 - a * a) / 2) * goe(rng, count, N) + a * gue(rng, count, N)


def bh_unitary(rng: RngStream, count: int, dims: BipartiteDims) -> np.ndarray:
    """Unitaries with density proportional to ``|det(1 + U)|^(2(n-N))``.

    Rejection against Haar with envelope ``2^(2N(n-N))``.
    """
    N, k = dims.N, dims.n - dims.N
    out = np.empty((count, N, N), dtype=complex)
    filled = 0
    bound = 2.0 ** (2 * N * k)
    while filled < count:
        m = max(64, 2 * (count - filled))
        U = haar_unitary(rng, m, N)
        w = np.abs(np.linalg.det(np.eye(N) + U)) ** (2 * k)
        keep = U[rng.uniform(m) * bound < w]
        take = min(len(keep), count - filled)
        out[filled:filled + take] = keep[:take]
        filled += take
    return out


def _normalize_trace(W: np.ndarray) -> np.ndarray:
    tr = np.real(np.trace(W, axis1=1, axis2=2))
    return W / tr[:, None, None]


# -- dispatch -------------------------------------------------------------------

def sample_batch(family, params, rng: RngStream, count: int) -> np.ndarray:
    """Stack of ``count`` samples of ``family``.

    Parameters
    ----------
    family : Family or str
    params : EnsembleParams, BipartiteDims, CrossoverParams, ProductSpec or int
        ``int`` or any object with ``N`` gives the matrix size for the
        Gaussian and Haar families.
    rng : RngStream
    count : int

    Returns
    -------
    ndarray
        ``(count, ...)``. Truncated orthogonal samples have shape
        ``(count, m, N, N)``, one block per factor of the product.
    """
    try:
        family = Family(family)
    except ValueError:
        raise UnsupportedFamily(f"unknown family {family!r}") from None
    if family in (Family.REAL_GINIBRE, Family.COMPLEX_GINIBRE):
        shape = (params.n, params.N) if isinstance(params, BipartiteDims) else (_size(params),) * 2
        if family is Family.REAL_GINIBRE:
            return rng.normal((count,) + shape)
        return rng.complex_normal((count,) + shape)
    if family is Family.GOE:
        return goe(rng, count, _size(params))
    if family is Family.GUE:
        return gue(rng, count, _size(params))
    if family is Family.HAAR_UNITARY:
        return haar_unitary(rng, count, _size(params))
    if family is Family.HAAR_ORTHOGONAL:
        return haar_orthogonal(rng, count, _size(params))
    if family is Family.TRUNCATED_ORTHOGONAL:
        if not isinstance(params, ProductSpec) or not params.L:
            raise ValidationError("truncatedOrthogonal needs a ProductSpec with L")
        N = params.N
        blocks = [haar_orthogonal(rng, count, N + L)[:, :N, :N] for L in params.L]
        return np.stack(blocks, axis=1)
    if family is Family.FIXED_TRACE_HS:
        if not isinstance(params, BipartiteDims):
            raise ValidationError("fixedTraceHS needs BipartiteDims")
        G = rng.complex_normal((count, params.n, params.N))
        return _normalize_trace(np.conj(np.swapaxes(G, 1, 2)) @ G)
    if family is Family.FIXED_TRACE_BH:
        if not isinstance(params, BipartiteDims):
            raise ValidationError("fixedTraceBH needs BipartiteDims")
        G = rng.complex_normal((count, params.n, params.N))
        G = G @ (np.eye(params.N) + bh_unitary(rng, count, params))
        return _normalize_trace(np.conj(np.swapaxes(G, 1, 2)) @ G)
    if family is Family.SCATTERING_BLOCK:
        if not isinstance(params, EnsembleParams) or params.n is None:
            raise ValidationError("scatteringBlock needs EnsembleParams with n")
        N, n = params.N, params.n
        if params.beta == 2:
            S = haar_unitary(rng, count, n + N)
        elif params.beta == 1:
            U = haar_unitary(rng, count, n + N)
            S = np.swapaxes(U, 1, 2) @ U
        else:
            raise UnsupportedFamily("no scattering sampler for beta=4")
        return S[:, :N, N:]
    if family is Family.CROSSOVER:
        if not isinstance(params, CrossoverParams):
            raise ValidationError("crossover needs CrossoverParams")
        return crossover_matrix(rng, count, params)
    raise UnsupportedFamily(f"unsupported family {family}")  # pragma: no cover


def sample_ensemble(family, params, rng: RngStream) -> np.ndarray:
    """One sample of ``family``; see :func:`sample_batch`."""
    return sample_batch(family, params, rng, 1)[0]
