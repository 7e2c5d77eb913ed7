"""Scalar statistics drawn from the samplers, collected over fixed substreams.

Samples are produced in fixed-size chunks; chunk ``i`` always uses substream
``i`` of the seed, so results do not depend on the number of worker threads.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable

import numpy as np

from ..crossover import CrossoverParams
from ..fixedtrace import BipartiteDims
from ..meijerg import ProductSpec
from ..recursion import EnsembleParams
from .eigen import eigvalsh_batch
from .realcount import count_real_batch
from .rng import RngStream
from .samplers import Family, crossover_matrix, sample_batch

__all__ = [
    "CHUNK",
    "thread_count",
    "collect",
    "purity",
    "von_neumann",
    "smallest_eigenvalue",
    "conductance",
    "hs_distance",
    "root_fidelity",
    "fidelity",
    "all_real",
    "crossover_ratio",
    "eigvec_components",
]

CHUNK = 5000


def thread_count() -> int:
    """Worker threads, capped by ``RMT_EXACT_THREADS``."""
    cap = os.environ.get("RMT_EXACT_THREADS")
    n = os.cpu_count() or 1
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            pass
    return n


def collect(stat: Callable[[RngStream, int], np.ndarray], count: int, seed: int = 42,
            chunk: int = CHUNK, threads: int | None = None) -> np.ndarray:
    """Draw ``count`` values of ``stat`` over substreams ``0, 1, ...``.

    Parameters
    ----------
    stat : callable
        ``stat(rng, size) -> ndarray`` of ``size`` values.
    count : int
    seed : int
    chunk : int
        Values per substream. Part of the reproducibility contract.
    threads : int, optional
        Defaults to :func:`thread_count`.
    """
    sizes = [chunk] * (count // chunk) + ([count % chunk] if count % chunk else [])
    jobs = [(i, s) for i, s in enumerate(sizes)]

    def run(job):
        i, s = job
        return np.asarray(stat(RngStream(seed, i), s))

    threads = threads or thread_count()
    if threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(run, jobs))
    else:
        parts = [run(j) for j in jobs]
    return np.concatenate(parts) if parts else np.empty(0)


# -- fixed-trace density matrices ------------------------------------------------

def _rho(measure: str, dims: BipartiteDims, rng, size):
    fam = Family.FIXED_TRACE_HS if measure == "HS" else Family.FIXED_TRACE_BH
    return sample_batch(fam, dims, rng, size)


def _spectrum(rho):
    return np.clip(eigvalsh_batch(rho), 0.0, None)


def purity(measure: str, dims: BipartiteDims):
    """``Tr rho^2``."""
    def stat(rng, size):
        rho = _rho(measure, dims, rng, size)
        return np.real(np.einsum("bij,bji->b", rho, rho))
    return stat


def von_neumann(measure: str, dims: BipartiteDims):
    """``-sum l ln l`` over the spectrum."""
    def stat(rng, size):
        lam = _spectrum(_rho(measure, dims, rng, size))
        with np.errstate(divide="ignore", invalid="ignore"):
            terms = np.where(lam > 0, lam * np.log(lam), 0.0)
        return -terms.sum(axis=1)
    return stat


def smallest_eigenvalue(dims: BipartiteDims):
    def stat(rng, size):
        return _spectrum(_rho("HS", dims, rng, size))[:, 0]
    return stat


def _sqrtm_psd(rho):
    w, V = eigvalsh_batch(rho, want_vectors=True)
    w = np.sqrt(np.clip(w, 0.0, None))
    return (V * w[:, None, :]) @ np.conj(np.swapaxes(V, 1, 2))


def _root_fid(d1, d2, rng, size):
    r1 = _rho("HS", d1, rng, size)
    r2 = _rho("HS", d2, rng, size)
    M = _sqrtm_psd(r1) @ _sqrtm_psd(r2)
    MM = np.conj(np.swapaxes(M, 1, 2)) @ M
    MM = (MM + np.conj(np.swapaxes(MM, 1, 2))) / 2
    return np.sqrt(np.clip(eigvalsh_batch(MM), 0.0, None)).sum(axis=1), r1, r2


def hs_distance(d1: BipartiteDims, d2: BipartiteDims):
    """``Tr (rho_1 - rho_2)^2`` for independent HS states."""
    def stat(rng, size):
        D = _rho("HS", d1, rng, size) - _rho("HS", d2, rng, size)
        return np.real(np.einsum("bij,bji->b", D, D))
    return stat


def root_fidelity(d1: BipartiteDims, d2: BipartiteDims):
    """``Tr |sqrt(rho_1) sqrt(rho_2)|``."""
    def stat(rng, size):
        return _root_fid(d1, d2, rng, size)[0]
    return stat


def fidelity(d1: BipartiteDims, d2: BipartiteDims):
    """Squared root fidelity."""
    def stat(rng, size):
        return _root_fid(d1, d2, rng, size)[0] ** 2
    return stat


# -- conductance -------------------------------------------------------------------

def conductance(params: EnsembleParams):
    """``Tr t^dagger t`` for the transmission block."""
    def stat(rng, size):
        t = sample_batch(Family.SCATTERING_BLOCK, params, rng, size)
        return (np.abs(t) ** 2).sum(axis=(1, 2))
    return stat


# -- products of real matrices -----------------------------------------------------

def _product(spec: ProductSpec, rng, size):
    if spec.L:
        blocks = sample_batch(Family.TRUNCATED_ORTHOGONAL, spec, rng, size)
        factors = [blocks[:, i] for i in range(spec.m)]
    else:
        factors = [sample_batch(Family.REAL_GINIBRE, spec.N, rng, size) for _ in range(spec.m)]
    P = factors[0]
    for F in factors[1:]:
        P = P @ F
    return P


def all_real(spec: ProductSpec, tol: float = 1e-10):
    """Indicator that the product has only real eigenvalues.

    Samples whose Sturm sequence is ambiguous are discarded and redrawn.
    """
    def stat(rng, size):
        out = []
        need = size
        while need:
            c = count_real_batch(_product(spec, rng, need), tol)
            ok = c >= 0
            out.append((c[ok] == spec.N).astype(float))
            need -= int(ok.sum())
        return np.concatenate(out)
    return stat


# -- crossover ---------------------------------------------------------------------

def crossover_ratio(params: CrossoverParams):
    """``(l3 - l2)/(l2 - l1)`` for ``N = 3``."""
    p3 = CrossoverParams(alpha=params.alpha, N=3)

    def stat(rng, size):
        lam = eigvalsh_batch(crossover_matrix(rng, size, p3))
        return (lam[:, 2] - lam[:, 1]) / (lam[:, 1] - lam[:, 0])
    return stat


def eigvec_components(epsilon: float, N: int = 400, central: float = 0.1):
    """Scaled components ``N |psi_i|^2`` of eigenvectors near the spectrum center.

    Uses ``alpha = sqrt(epsilon / N)``. At this size LAPACK replaces Jacobi.
    Each matrix contributes one component from each of the ``central``
    fraction of its eigenvectors: components of one eigenvector share its
    degree of complexity and are not independent.
    """
    p = CrossoverParams(alpha=float(np.sqrt(epsilon / N)), N=N)
    k = max(1, int(round(central * N)))
    cols = np.arange((N - k) // 2, (N - k) // 2 + k)
    rows = (7 * cols) % N

    def stat(rng, size):
        out = []
        have = 0
        while have < size:
            H = crossover_matrix(rng, 1, p)[0]
            _, V = np.linalg.eigh(H)
            x = N * np.abs(V[rows, cols]) ** 2
            out.append(x)
            have += x.size
        return np.concatenate(out)[:size]
    return stat
