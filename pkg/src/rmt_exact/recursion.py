"""Incomplete Selberg-type integrals ``Q_N(s)`` for the Laguerre beta ensemble.

``Q_N(s)`` is the N-fold integral over ``[0, s]^N`` of

    prod_l x_l^atilde exp(-beta x_l / 2) * prod_{j<k} |x_k - x_j|^beta.

It is computed by a differential-difference recurrence in the
elementary-symmetric index ``p`` (:func:`recurrence_step`), nested inside an
outer integration that adds one variable at a time. :func:`q_bruteforce`
gives an independent oracle and :func:`assemble_ode` the equivalent
first-order matrix system.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import DivisionByZero, TemplateViolation, TooLarge, ValidationError
from .exactnum.erfexpo import ErfExpoSum, antiderive_on_interval, differentiate

__all__ = [
    "EnsembleParams",
    "RecursionState",
    "recurrence_step",
    "q_laguerre",
    "q_bruteforce",
    "q_numeric",
    "assemble_ode",
    "ode_residual",
    "check_template",
]


@dataclass(frozen=True)
class EnsembleParams:
    """Parameters of the Jacobi/Laguerre beta ensemble behind ``Q_N``.

    Parameters
    ----------
    N : int
        Number of eigenvalues (channels on the short side).
    beta : int
        Dyson index, one of 1, 2, 4.
    atilde : Fraction
        Weight exponent ``beta*a/2`` with ``a = n - N - 2/beta + 1``.
    n : int or None
        Channel count on the long side. When given it must reproduce
        ``atilde``.
    """

    N: int
    beta: int
    atilde: Fraction
    n: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "atilde", Fraction(self.atilde))
        if not isinstance(self.N, int) or self.N < 1:
            raise ValidationError(f"N must be a positive integer, got {self.N!r}")
        if self.beta not in (1, 2, 4):
            raise ValidationError(f"beta must be 1, 2 or 4, got {self.beta!r}")
        a = self.atilde
        if self.beta == 1:
            if a.denominator not in (1, 2) or a < Fraction(-1, 2):
                raise ValidationError("for beta=1, atilde must be a half-integer >= -1/2")
        elif a.denominator != 1 or a < 0:
            raise ValidationError(f"for beta={self.beta}, atilde must be a nonnegative integer")
        if self.n is not None:
            if self.n < self.N:
                raise ValidationError("n must be >= N")
            if self.atilde_from(self.n, self.N, self.beta) != a:
                raise ValidationError(
                    f"atilde={a} is inconsistent with n={self.n}, N={self.N}, beta={self.beta}"
                )

    @staticmethod
    def atilde_from(n: int, N: int, beta: int) -> Fraction:
        return Fraction(beta * (n - N + 1), 2) - 1

    @classmethod
    def from_channels(cls, N: int, n: int, beta: int) -> "EnsembleParams":
        return cls(N=N, beta=beta, atilde=cls.atilde_from(n, N, beta), n=n)

    @property
    def n_effective(self) -> Fraction:
        """``n`` implied by ``atilde`` (may be non-integer only for invalid input)."""
        return (self.atilde + 1) * Fraction(2, self.beta) + self.N - 1

    @property
    def lam(self) -> Fraction:
        return Fraction(self.beta, 2)

    @property
    def half_integer(self) -> bool:
        return self.atilde.denominator == 2


@dataclass(frozen=True)
class RecursionState:
    """Indices and rates for one step of the ``p``-recurrence."""

    p: int
    nu: int
    alpha: int
    lam: Fraction
    lam1: Fraction

    @property
    def Bp(self) -> Fraction:
        return _B(self.p, self.nu, self.alpha, self.lam, self.lam1)

    @property
    def Dp(self) -> Fraction:
        return _D(self.p, self.nu, self.alpha, self.lam)


def _B(p, nu, alpha, lam, lam1):
    return (p - nu) * (lam1 + alpha + 1 + lam * (nu - p - 1))


def _D(p, nu, alpha, lam):
    return p * (lam * (nu - p) + alpha + 1)


def recurrence_step(state: RecursionState, Lp: ErfExpoSum, Lpm1: ErfExpoSum) -> ErfExpoSum:
    """Return ``L_{p+1}`` from ``L_p`` and ``L_{p-1}``.

    ``lam (nu-p) L_{p+1} = (lam (nu-p) x + B_p) L_p + x L_p' - D_p x L_{p-1}``.
    """
    p, nu, lam = state.p, state.nu, Fraction(state.lam)
    c = lam * (nu - p)
    if c == 0:
        raise DivisionByZero(f"lambda*(nu-p) vanishes at p={p}, nu={nu}")
    out = Lp.shift_power(2) * c + Lp * state.Bp + differentiate(Lp).shift_power(2)
    Dp = state.Dp
    if Dp:
        out = out - Lpm1.shift_power(2) * Dp
    return out / c


def _run_p_chain(L0: ErfExpoSum, nu: int, alpha: int, lam, lam1, trace=None) -> ErfExpoSum:
    """Iterate the recurrence from ``L_0`` to ``L_nu``."""
    prev, cur = ErfExpoSum.zero(), L0
    chain = [L0]
    for p in range(nu):
        nxt = recurrence_step(RecursionState(p, nu, alpha, lam, lam1), cur, prev)
        prev, cur = cur, nxt
        chain.append(cur)
    if trace is not None:
        trace.append((nu, alpha, chain))
    return cur


def _weight(atilde: Fraction, lam: Fraction) -> ErfExpoSum:
    return ErfExpoSum.term(1, m=int(2 * atilde), rho=lam)


@lru_cache(maxsize=256)
def _q_laguerre_cached(N: int, beta: int, atilde: Fraction) -> ErfExpoSum:
    return _q_laguerre_impl(N, beta, atilde, None)


def _q_laguerre_impl(N, beta, atilde, trace):
    lam = Fraction(beta, 2)
    w = _weight(atilde, lam)
    Q = ErfExpoSum.constant(1)  # Q_0
    for nu in range(N):
        # Q_nu = L_{0,nu}^{(0)}; raise the hard-edge exponent to beta.
        L = Q
        for alpha in range(beta):
            L = _run_p_chain(L, nu, alpha, lam, atilde, trace)
        # Symmetrize over which variable is largest.
        Q = antiderive_on_interval(w * L) * (nu + 1)
    return Q


def q_laguerre(params: EnsembleParams, trace: list | None = None) -> ErfExpoSum:
    """``Q_N(s)`` by the nested recurrence.

    Parameters
    ----------
    params : EnsembleParams
    trace : list, optional
        When given, receives ``(nu, alpha, [L_0, ..., L_nu])`` for every inner
        chain, for ODE residual checks.

    Returns
    -------
    ErfExpoSum
        Exact ``Q_N(s)`` in the variable ``s``. For ``beta = 1`` with
        half-integer ``atilde`` the result is checked against the reduced
        erf template.
    """
    if trace is not None:
        Q = _q_laguerre_impl(params.N, params.beta, params.atilde, trace)
    else:
        Q = _q_laguerre_cached(params.N, params.beta, params.atilde)
    if params.beta == 1 and params.half_integer:
        check_template(Q, params.N)
    return Q


def check_template(Q: ErfExpoSum, N: int) -> None:
    """Raise :class:`TemplateViolation` unless ``Q`` has the reduced erf shape.

    Odd ``N``: ``sqrt(s) e^{-(2l-1)s/2} poly`` and ``erf(sqrt(s/2)) e^{-(l-1)s} poly``.
    Even ``N``: ``e^{-(l-1)s} poly`` and ``sqrt(s) erf(sqrt(s/2)) e^{-(l-1/2)s} poly``.
    """
    for (m, rho, erf), c in Q.items():
        if erf not in ((), ((1, 1),)):
            raise TemplateViolation(f"erf factor {erf} survives in Q_{N}")
        has_erf = bool(erf)
        half_rate = (2 * rho) % 2 == 1
        odd_power = m % 2 == 1
        if N % 2:
            ok = (odd_power and half_rate and not has_erf) or (not odd_power and not half_rate and has_erf)
        else:
            ok = (not odd_power and not half_rate and not has_erf) or (odd_power and half_rate and has_erf)
        if not ok or m < 0:
            raise TemplateViolation(f"term s^({m}/2) e^(-{rho}s) erf={erf} breaks the template for N={N}")


# --------------------------------------------------------------------------
# Matrix ODE
# --------------------------------------------------------------------------

def assemble_ode(nu: int, lam, lam1, alpha: int):
    """Matrices ``A, B`` with ``x L' = (x A + B) L`` for ``L = (L_0..L_nu)``.

    Returns
    -------
    (list[list[Fraction]], list[list[Fraction]])
    """
    if nu < 1:
        raise ValidationError("nu must be >= 1")
    lam, lam1 = Fraction(lam), Fraction(lam1)
    size = nu + 1
    A = [[Fraction(0)] * size for _ in range(size)]
    B = [[Fraction(0)] * size for _ in range(size)]
    for p in range(size):
        A[p][p] = -(nu - p) * lam
        if p > 0:
            A[p][p - 1] = _D(p, nu, alpha, lam)
        B[p][p] = -_B(p, nu, alpha, lam, lam1)
        if p < nu:
            B[p][p + 1] = (nu - p) * lam
    return A, B


def ode_residual(L: list, lam, lam1, alpha: int) -> list:
    """Componentwise ``x L' - (x A + B) L``; all zero for a valid chain."""
    nu = len(L) - 1
    A, B = assemble_ode(nu, lam, lam1, alpha)
    out = []
    for p in range(nu + 1):
        r = differentiate(L[p]).shift_power(2)
        for q in range(nu + 1):
            if A[p][q]:
                r = r - L[q].shift_power(2) * A[p][q]
            if B[p][q]:
                r = r - L[q] * B[p][q]
        out.append(r)
    return out


# --------------------------------------------------------------------------
# Brute-force oracle
# --------------------------------------------------------------------------

def _vandermonde_power(N: int, beta: int) -> dict:
    """``prod_{j<k} (x_j - x_k)^beta`` as {exponent tuple: int}."""
    poly = {(0,) * N: 1}
    for j, k in itertools.combinations(range(N), 2):
        factor = {}
        for i in range(beta + 1):
            e = [0] * N
            e[j] += beta - i
            e[k] += i
            factor[tuple(e)] = math.comb(beta, i) * (-1) ** i
        new = {}
        for e1, c1 in poly.items():
            for e2, c2 in factor.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                new[e] = new.get(e, 0) + c1 * c2
        poly = {e: c for e, c in new.items() if c}
    return poly


def _int_exp_poly(k: int, r: Fraction):
    """``int_0^y x^k e^{-r x} dx`` as [(coef, power of y, rate of y)]."""
    if r == 0:
        return [(Fraction(1, k + 1), k + 1, Fraction(0))]
    out = [(math.factorial(k) / r ** (k + 1), 0, Fraction(0))]
    for i in range(k + 1):
        out.append((-Fraction(math.factorial(k), math.factorial(i)) * r ** i / r ** (k + 1), i, r))
    return out


def q_bruteforce(params: EnsembleParams) -> ErfExpoSum:
    """``Q_N(s)`` by direct expansion on the ordered sector.

    The pairwise product is expanded as a polynomial on
    ``x_1 > x_2 > ... > x_N`` (where it is nonnegative for any beta) and the
    variables are integrated innermost-first with a self-contained
    exponential-polynomial integrator. Restricted to ``N <= 3`` and integer
    ``atilde <= 4``.
    """
    N, beta, a = params.N, params.beta, params.atilde
    if N > 3 or a.denominator != 1 or a > 4:
        raise TooLarge("symbolic brute force supports N <= 3 and integer atilde <= 4")
    a = int(a)
    lam = Fraction(beta, 2)
    # state: {(powers tuple, rates tuple): coef} over the still-open variables
    state = {}
    for e, c in _vandermonde_power(N, beta).items():
        key = (tuple(x + a for x in e), (lam,) * N)
        state[key] = state.get(key, 0) + Fraction(c)
    for v in range(N - 1, 0, -1):
        new = {}
        for (pw, rt), c in state.items():
            for coef, k, r in _int_exp_poly(pw[v], rt[v]):
                npw = list(pw[:v])
                nrt = list(rt[:v])
                npw[v - 1] += k
                nrt[v - 1] += r
                key = (tuple(npw), tuple(nrt))
                new[key] = new.get(key, 0) + c * coef
        state = {k: c for k, c in new.items() if c}
    out = {}
    for (pw, rt), c in state.items():
        for coef, k, r in _int_exp_poly(pw[0], rt[0]):
            key = (2 * k, r, ())
            out[key] = out.get(key, 0) + c * coef
    return ErfExpoSum(out) * math.factorial(N)


def q_numeric(params: EnsembleParams, s: float, epsrel: float = 1e-12) -> float:
    """``Q_N(s)`` by adaptive quadrature on the ordered sector.

    Uses ``x = u^2`` so half-integer weights become smooth.
    """
    from scipy import integrate

    N, beta = params.N, params.beta
    a = float(params.atilde)
    lam = beta / 2.0
    root = math.sqrt(s)

    def f(*u):
        u = np.asarray(u)
        x = u * u
        val = np.prod(2.0 * u ** (2 * a + 1) * np.exp(-lam * x))
        for j in range(N):
            for k in range(j + 1, N):
                val *= abs(x[j] - x[k]) ** beta
        return val

    # nquad's first range is the innermost variable: u_0 < u_1 < ... < u_{N-1}
    ranges = []
    for i in range(N - 1):
        ranges.append(lambda *outer, i=i: (0.0, outer[0]))
    ranges.append((0.0, root))
    val, _ = integrate.nquad(f, ranges, opts={"epsrel": epsrel, "epsabs": 0, "limit": 200})
    return val * math.factorial(N)
