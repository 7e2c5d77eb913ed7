"""Exact inverse Laplace transforms and the conductance distribution.

The Laplace transform of the trace statistic ``T = sum_j lambda_j`` of the
Jacobi ensemble with weight ``lambda^atilde`` on ``(0, 1)`` is, in the scaled
variable ``beta s / 2``,

    E[exp(-beta s T / 2)] = s^(-gamma) Q_N(s) / S_N,     gamma = beta n N / 2,

with ``S_N`` the Selberg normalization. Inverting term by term in ``s`` and
rescaling back to ``t`` gives the exact piecewise density of ``T``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import NonpositiveExponent, UnsupportedInversion
from .exactnum.erfexpo import ErfExpoSum
from .exactnum.piecewise import PiecewisePuiseux
from .exactnum.symbolic import SQRT_PI, SymbolicValue, gamma_exact
from .recursion import EnsembleParams, q_laguerre

__all__ = [
    "LaplacePrefactor",
    "selberg",
    "invert_term",
    "invert",
    "conductance_pdf",
    "conductance_transform",
]


def selberg(N: int, a, b, g) -> SymbolicValue:
    """Selberg integral ``int_{[0,1]^N} prod x^(a-1)(1-x)^(b-1) |Delta|^(2g)``.

    All Gamma arguments must be positive integers or half-integers.
    """
    a, b, g = Fraction(a), Fraction(b), Fraction(g)
    out = SymbolicValue.rational(1)
    for j in range(N):
        num = gamma_exact(a + j * g) * gamma_exact(b + j * g) * gamma_exact(1 + (j + 1) * g)
        den = gamma_exact(a + b + (N + j - 1) * g) * gamma_exact(1 + g)
        out = out * num / den
    return out


@dataclass(frozen=True)
class LaplacePrefactor:
    """Power ``gamma`` of ``s^(-gamma)`` and the density constant ``K``.

    With ``Q_N(s) = sum_j e^{-j beta s/2} sum_k d_jk s^k`` (integer case)

        P(t) = K sum_{j,k} d_jk (2/beta)^k (t-j)^(gamma-k-1) / Gamma(gamma-k) Theta(t-j),

    where ``K = (beta/2)^gamma / S_N``.
    """

    gamma: Fraction
    S: SymbolicValue
    K: SymbolicValue

    @classmethod
    def for_params(cls, params: EnsembleParams) -> "LaplacePrefactor":
        N, beta, a = params.N, params.beta, params.atilde
        gamma = (a + 1) * N + Fraction(beta * N * (N - 1), 2)
        S = selberg(N, a + 1, 1, Fraction(beta, 2))
        K = SymbolicValue.rational_power(Fraction(beta, 2), gamma) / S
        return cls(gamma=gamma, S=S, K=K)


def _erf_kernel_poly(k: int):
    """Coefficients in ``u`` of ``sqrt(2/pi)/k! * int_0^1 (u - v^2/2)^k dv``.

    Returned as rationals multiplying ``sqrt(2/pi)``.
    """
    out = [Fraction(0)] * (k + 1)
    for i in range(k + 1):
        out[k - i] += Fraction(math.comb(k, i) * (-1) ** i, 2**i * (2 * i + 1) * math.factorial(k))
    return out


def invert_term(coef, s_power_half: int, rate, erf_present: bool, gamma) -> PiecewisePuiseux:
    """Inverse Laplace transform of ``coef s^(m/2 - gamma) e^(-c s) [erf(sqrt(s/2))]``.

    Parameters
    ----------
    coef : SymbolicValue or rational
    s_power_half : int
        ``m`` in ``s^(m/2)``.
    rate : rational
        Shift ``c``.
    erf_present : bool
        Whether the term carries one factor ``erf(sqrt(s/2))``.
    gamma : rational
        Global power of ``s^(-gamma)``.

    Returns
    -------
    PiecewisePuiseux
        Function of ``tau`` (support not yet meaningful, set to ``[0, inf)``
        surrogate by the caller).
    """
    coef = SymbolicValue.coerce(coef)
    c = Fraction(rate)
    mu = Fraction(gamma) - Fraction(s_power_half, 2)
    if mu <= 0:
        raise NonpositiveExponent(f"effective exponent {mu} <= 0")
    if (2 * mu).denominator != 1:
        raise UnsupportedInversion(f"exponent {mu} is not a half-integer")
    big = c + 1 + max(int(mu), 1)  # placeholder support; caller resets it
    if not erf_present:
        # (t-c)^(mu-1) / Gamma(mu)
        return PiecewisePuiseux({(c, c, int(2 * mu - 2)): coef / gamma_exact(mu)}, support=(0, big))
    # erf(sqrt(s/2)) s^-mu = sqrt(2/pi) int_0^1 s^(1/2-mu) e^(-s v^2/2) dv
    if mu.denominator != 2:
        raise UnsupportedInversion(f"erf term with integer exponent {mu} leaves the Puiseux class")
    k = int(mu - Fraction(3, 2))
    half = Fraction(1, 2)
    if k == -1:
        # sqrt(2/pi) int_0^1 delta(u - v^2/2) dv = (pi u)^(-1/2) on (0, 1/2)
        a = coef / SQRT_PI
        return PiecewisePuiseux({(c, c, -1): a, (c + half, c, -1): -a}, support=(0, big))
    # u < 1/2: sqrt(2/pi)/k! * sqrt(2u) u^k int_0^1 (1-w^2)^k dw
    ck = Fraction(4**k * math.factorial(k) ** 2, math.factorial(2 * k + 1))
    a = coef / SQRT_PI * (2 * ck / math.factorial(k))
    terms = {(c, c, 2 * k + 1): a, (c + half, c, 2 * k + 1): -a}
    root = SymbolicValue.sqrt_rational(2) / SQRT_PI * coef
    for j, pj in enumerate(_erf_kernel_poly(k)):
        if pj:
            # polynomial in (u - c), re-anchored at c + 1/2 by the constructor
            terms[(c + half, c, 2 * j)] = terms.get((c + half, c, 2 * j), 0) + root * pj
    return PiecewisePuiseux(terms, support=(0, big))


def invert(Q: ErfExpoSum, gamma) -> PiecewisePuiseux:
    """Term-wise inverse of ``s^(-gamma) Q(s)``."""
    total = None
    for (m, rho, erf), c in Q.items():
        if erf not in ((), ((1, 1),)):
            raise UnsupportedInversion(f"erf factor {erf} has no implemented inverse")
        piece = invert_term(c, m, rho, bool(erf), gamma)
        total = piece if total is None else total + piece
    return total if total is not None else PiecewisePuiseux({})


def conductance_transform(params: EnsembleParams):
    """Return ``(Q_N, prefactor)`` so that ``E[e^{-beta s T/2}] = s^-gamma Q_N / S``."""
    return q_laguerre(params), LaplacePrefactor.for_params(params)


def conductance_pdf(params: EnsembleParams) -> PiecewisePuiseux:
    """Exact density of ``G/G0 = Tr t^dagger t`` on ``[0, N]``.

    Examples
    --------
    >>> from rmt_exact.recursion import EnsembleParams
    >>> print(conductance_pdf(EnsembleParams(N=1, beta=2, atilde=0)))
    1*H(t-0)
    """
    Q, pre = conductance_transform(params)
    g = invert(Q, pre.gamma)
    half_beta = Fraction(params.beta, 2)
    pdf = (g * (half_beta / pre.S)).rescale(half_beta)
    return pdf.with_support((0, params.N))
