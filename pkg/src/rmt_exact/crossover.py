"""GOE to GUE crossover statistics.

The crossover matrix is ``sqrt((1 - alpha^2)/2) A + alpha B`` with ``A`` a GOE
matrix of weight ``exp(-Tr A^2 / 2)`` and ``B`` a GUE matrix of weight
``exp(-Tr B^2)``; the real part then has the same law for every ``alpha``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np
from scipy import integrate

from .errors import Divergent, DomainError, QuadratureFailure, ValidationError

__all__ = [
    "CrossoverParams",
    "ENDPOINT_OFFSET",
    "ratio_pdf",
    "ratio_cdf",
    "ratio_cdf_function",
    "ratio_fractional_moment",
    "eigvec_component_pdf",
    "eigvec_moment",
    "eigvec_cdf_table",
]

ENDPOINT_OFFSET = 1e-4
_DPS = 40


@dataclass(frozen=True)
class CrossoverParams:
    """Crossover strength ``alpha`` in ``[0, 1]``; ``epsilon = N alpha^2`` for eigenvectors.

    Parameters
    ----------
    alpha : float
    epsilon : float, optional
        Scaled crossover parameter of the eigenvector statistic. Derived from
        ``N`` when omitted.
    N : int, optional
    """

    alpha: float = 0.5
    epsilon: float | None = None
    N: int | None = None

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValidationError(f"alpha must lie in [0, 1], got {self.alpha}")
        if self.epsilon is None and self.N is not None:
            object.__setattr__(self, "epsilon", self.N * self.alpha**2)
        if self.epsilon is not None and self.epsilon < 0:
            raise ValidationError("epsilon must be nonnegative")

    @property
    def alpha_eff(self) -> float:
        """``alpha`` moved off the endpoints where the closed form is ``0 * inf``."""
        return min(max(self.alpha, ENDPOINT_OFFSET), 1.0 - ENDPOINT_OFFSET)

    @property
    def b(self) -> float:
        a = self.alpha_eff
        return math.sqrt((1 - a * a) / (8 * a * a))

    @staticmethod
    def a_of_r(r: float) -> float:
        return math.sqrt((r * r + r + 1) / 6)


def _ratio_pdf_mp(r, alpha):
    r = mpmath.mpf(r)
    al = mpmath.mpf(alpha)
    a = mpmath.sqrt((r * r + r + 1) / 6)
    b = mpmath.sqrt((1 - al**2) / (8 * al**2))
    a2, b2 = a * a, b * b

    def frac(t):
        return b * t * (5 * a2 + 3 * b2 * t * t) / (a**4 * (a2 + b2 * t * t) ** 2)

    bracket = frac(1) + frac(r) - frac(r + 1)
    bracket += 3 / a**5 * mpmath.atan(b**3 * r * (r + 1) / (a**3 + a * b2 * (r * r + r + 1)))
    pref = r * (r + 1) / (16 * mpmath.sqrt(6) * mpmath.pi * (1 - al**2) ** mpmath.mpf(1.5))
    return pref * bracket


def ratio_pdf(params: CrossoverParams, r: float) -> float:
    """Density of ``r = (l3 - l2)/(l2 - l1)`` for the ``N = 3`` crossover ensemble."""
    if not r > 0:
        raise DomainError(f"r must be positive, got {r}")
    with mpmath.workdps(_DPS):
        return float(_ratio_pdf_mp(r, params.alpha_eff))


def ratio_cdf(params: CrossoverParams, r) -> np.ndarray:
    """CDF by quadrature; accepts scalars or arrays."""
    r = np.atleast_1d(np.asarray(r, dtype=float))
    order = np.argsort(r)
    out = np.empty_like(r)
    f = lambda x: ratio_pdf(params, x) if x > 0 else 0.0  # noqa: E731
    acc, prev = 0.0, 0.0
    for idx in order:
        x = max(r[idx], 0.0)
        if x > prev:
            acc += integrate.quad(f, prev, x, epsabs=1e-12, epsrel=1e-10, limit=200)[0]
            prev = x
        out[idx] = acc
    return out


def ratio_cdf_function(params: CrossoverParams, n: int = 400):
    """Vectorized CDF from a table on ``(0, 1]`` and ``F(r) = 1 - F(1/r)``.

    ``r`` and ``1/r`` have the same law, so the table never leaves ``(0, 1]``.
    """
    xs = np.linspace(0.0, 1.0, n + 1)
    Fs = np.concatenate([[0.0], ratio_cdf(params, xs[1:])])

    def cdf(r):
        r = np.asarray(r, dtype=float)
        inside = np.interp(np.clip(r, 0.0, 1.0), xs, Fs)
        with np.errstate(divide="ignore"):
            outside = 1.0 - np.interp(np.where(r > 1, 1.0 / np.maximum(r, 1.0), 1.0), xs, Fs)
        return np.where(r <= 0, 0.0, np.where(r <= 1, inside, outside))

    return cdf


def _small_r_exponent(params: CrossoverParams) -> int:
    # quadratic repulsion for any mixing, linear only at the GOE endpoint
    return 1 if params.alpha == 0.0 else 2


def ratio_fractional_moment(params: CrossoverParams, q: float) -> float:
    """``int_0^inf r^q p(r) dr`` by quadrature on ``(0,1)`` and ``(1, inf)``."""
    s0 = _small_r_exponent(params)
    # p ~ r^s0 at 0 and ~ r^-(s0+2) at infinity
    if not (-(s0 + 1) < q < s0 + 1):
        raise Divergent(f"moment of order {q} diverges (window is ({-(s0 + 1)}, {s0 + 1}))")
    f = lambda r: r**q * ratio_pdf(params, r) if r > 0 else 0.0  # noqa: E731
    # tail: substitute r = 1/u so the integrand is finite on (0, 1]
    g = lambda u: u ** (-q - 2) * ratio_pdf(params, 1 / u) if u > 0 else 0.0  # noqa: E731
    head, e1 = integrate.quad(f, 0, 1, epsabs=1e-13, epsrel=1e-11, limit=200)
    tail, e2 = integrate.quad(g, 0, 1, epsabs=1e-13, epsrel=1e-11, limit=200)
    if e1 + e2 > 1e-8:
        raise QuadratureFailure(f"moment error estimate {e1 + e2:.2e} too large")
    return head + tail


def eigvec_component_pdf(params: CrossoverParams, x: float, tol: float = 1e-10) -> float:
    """Density of the scaled eigenvector component ``x = N |psi_i|^2``.

    A single integral over ``phi`` in ``(0, pi)``, split around ``pi/2``.
    """
    eps = params.epsilon
    if eps is None or eps <= 0:
        raise ValidationError("a positive epsilon (or N with alpha > 0) is required")
    if not x > 0:
        raise DomainError(f"x must be positive, got {x}")

    def f(phi):
        s = math.sin(phi)
        if s == 0.0:
            return 0.0
        u = eps + 2 * x * math.sin(phi / 2) ** 2
        arg = u / (s * s)
        # e^eps folded into the exponent; arg >= eps so this never overflows
        if arg - eps > 700:
            return 0.0
        return math.exp(eps - arg) / u**1.5 * (2 * arg + 1)

    # the integrand peaks at pi/2 with width ~ 1/sqrt(eps)
    w = min(0.5, 6.0 / math.sqrt(eps))
    h = math.pi / 2
    edges = (0.0, h - w, h, h + w, math.pi)
    pref = eps / (2 * math.sqrt(math.pi))
    v = e = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        vi, ei = integrate.quad(f, lo, hi, epsabs=tol * 1e-2 / pref, epsrel=tol, limit=200)
        v, e = v + vi, e + ei
    val = pref * v
    if pref * e > max(1e3 * tol * abs(val), tol):
        raise QuadratureFailure(f"phi-integral error {pref * e:.2e} at x={x}")
    return val


def eigvec_moment(params: CrossoverParams, k: int = 0) -> float:
    """``int_0^inf x^k p(x) dx`` by two-level quadrature."""
    f = lambda x: x**k * eigvec_component_pdf(params, x) if x > 0 else 0.0  # noqa: E731
    pieces = [(0, 1), (1, 10), (10, np.inf)]
    return sum(integrate.quad(f, lo, hi, epsabs=1e-12, epsrel=1e-10, limit=200)[0] for lo, hi in pieces)


def eigvec_cdf_table(params: CrossoverParams, xmax: float = 40.0, n: int = 800):
    """Grid ``(xs, F(xs))`` of the component CDF for KS comparisons."""
    xs = np.concatenate([np.geomspace(1e-6, 0.05, 60), np.linspace(0.05, xmax, n)])
    xs = np.unique(np.concatenate([[0.0], xs]))
    f = lambda x: eigvec_component_pdf(params, x, tol=1e-9) if x > 0 else 0.0  # noqa: E731
    F = [0.0]
    for lo, hi in zip(xs[:-1], xs[1:]):
        F.append(F[-1] + integrate.quad(f, lo, hi, epsabs=1e-13, epsrel=1e-9)[0])
    return xs, np.array(F)
