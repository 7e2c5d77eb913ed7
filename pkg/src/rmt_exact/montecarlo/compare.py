"""Comparison of Monte Carlo samples with exact results."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np
from scipy import stats

from ..errors import ValidationError
from ..exactnum.piecewise import PiecewisePuiseux
from ..exactnum.symbolic import SymbolicValue

__all__ = ["SampleReport", "compare_to_exact", "exact_cdf", "merge_reports", "KS_ALPHA", "Z_MAX"]

KS_ALPHA = 1e-3
Z_MAX = 4.0
MIN_SAMPLES = 1000


@dataclass
class SampleReport:
    """Summary of one sampled statistic against its exact value or law.

    ``stderr`` is the sample standard deviation over ``sqrt(sample_count)``.
    """

    statistic_name: str
    sample_count: int
    mean: float
    stderr: float
    histogram: tuple = field(repr=False)
    ks_statistic: float | None = None
    ks_pvalue: float | None = None
    exact_mean: float | None = None
    z: float | None = None
    passed: bool | None = None
    _sumsq: float = field(default=0.0, repr=False)

    def to_dict(self) -> dict:
        # plain Python scalars so the result is JSON serializable
        def num(v):
            return None if v is None else float(v)

        return {
            "statistic": self.statistic_name,
            "n": int(self.sample_count),
            "mean": num(self.mean),
            "stderr": num(self.stderr),
            "ks": num(self.ks_statistic),
            "ks_pvalue": num(self.ks_pvalue),
            "exact_mean": num(self.exact_mean),
            "z": num(self.z),
            "passed": None if self.passed is None else bool(self.passed),
        }


def _to_float(v) -> float:
    if isinstance(v, SymbolicValue):
        return float(v.evalf(30))
    if isinstance(v, Fraction):
        return v.numerator / v.denominator
    return float(v)


def exact_cdf(pdf: PiecewisePuiseux) -> Callable[[np.ndarray], np.ndarray]:
    """CDF of an exact density, integrated term by term."""
    F = pdf.antiderivative()
    lo, hi = float(pdf.support[0]), float(pdf.support[1])
    total = float(F.evaluate(pdf.support[1]))

    def cdf(x):
        x = np.asarray(x, dtype=float)
        val = F.evaluate_array(np.clip(x, lo, hi))
        return np.where(x >= hi, total, np.where(x <= lo, 0.0, val))

    return cdf


def _cdf_from(exact):
    if isinstance(exact, PiecewisePuiseux):
        return exact_cdf(exact)
    if isinstance(exact, tuple) and len(exact) == 2:
        xs, Fs = (np.asarray(a, dtype=float) for a in exact)
        return lambda x: np.interp(x, xs, Fs, left=0.0, right=Fs[-1])
    if callable(exact):
        return exact
    raise ValidationError("ks mode needs a PiecewisePuiseux, a CDF callable or an (xs, F) table")


def compare_to_exact(samples, exact, mode: str = "ks", name: str = "statistic",
                     bins: int = 50) -> SampleReport:
    """Compare samples with an exact law (``ks``) or exact mean (``meanStderr``).

    Parameters
    ----------
    samples : array_like
        At least 1000 values.
    exact : PiecewisePuiseux, callable, (xs, F) table, SymbolicValue or number
    mode : {"ks", "meanStderr"}
    name : str
    bins : int

    Returns
    -------
    SampleReport
        ``passed`` is ``p >= 1e-3`` for KS and ``|z| <= 4`` for the mean.
    """
    x = np.asarray(samples, dtype=float).ravel()
    n = x.size
    if n < MIN_SAMPLES:
        raise ValidationError(f"need at least {MIN_SAMPLES} samples, got {n}")
    mean = float(x.mean())
    sd = float(x.std(ddof=1))
    stderr = sd / np.sqrt(n)
    counts, edges = np.histogram(x, bins=bins)
    rep = SampleReport(name, n, mean, stderr, (edges, counts), _sumsq=float((x * x).sum()))
    if mode == "ks":
        cdf = _cdf_from(exact)
        res = stats.kstest(x, cdf)
        rep.ks_statistic = float(res.statistic)
        rep.ks_pvalue = float(res.pvalue)
        rep.passed = rep.ks_pvalue >= KS_ALPHA
    elif mode == "meanStderr":
        mu = _to_float(exact)
        rep.exact_mean = mu
        rep.z = (mean - mu) / stderr if stderr > 0 else (0.0 if mean == mu else np.inf)
        rep.passed = abs(rep.z) <= Z_MAX
    else:
        raise ValidationError(f"unknown mode {mode!r}")
    return rep


def merge_reports(reports) -> SampleReport:
    """Pool moments and histograms of reports over identical bins.

    KS results are not merged; recompute them on the pooled samples.
    """
    reports = list(reports)
    if not reports:
        raise ValidationError("nothing to merge")
    edges = reports[0].histogram[0]
    for r in reports[1:]:
        if not np.array_equal(r.histogram[0], edges):
            raise ValidationError("histograms must share bin edges")
    n = sum(r.sample_count for r in reports)
    total = sum(r.mean * r.sample_count for r in reports)
    sumsq = sum(r._sumsq for r in reports)
    mean = total / n
    var = (sumsq - n * mean * mean) / (n - 1)
    counts = sum(r.histogram[1] for r in reports)
    return SampleReport(reports[0].statistic_name, n, mean, float(np.sqrt(max(var, 0.0) / n)),
                        (edges, counts), _sumsq=sumsq)
