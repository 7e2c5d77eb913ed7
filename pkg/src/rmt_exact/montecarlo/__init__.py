"""Monte Carlo oracles: samplers, small eigensolvers, real-root counting, comparisons."""

from ._backend import BACKEND
from .compare import SampleReport, compare_to_exact, exact_cdf, merge_reports
from .eigen import eigvalsh_batch, hermitian_eigen
from .realcount import count_real_batch, count_real_eigs
from .rng import RngStream
from .samplers import Family, sample_batch, sample_ensemble
from . import statistics

__all__ = [
    "BACKEND",
    "Family",
    "RngStream",
    "SampleReport",
    "compare_to_exact",
    "count_real_batch",
    "count_real_eigs",
    "eigvalsh_batch",
    "exact_cdf",
    "hermitian_eigen",
    "merge_reports",
    "sample_batch",
    "sample_ensemble",
    "statistics",
]
