"""Exact Meijer G-function values at ``z = 1`` and real-spectrum probabilities.

The probability that a product of ``m`` real random matrices (Ginibre, or
truncations of Haar orthogonal matrices) has only real eigenvalues is a
Gamma prefactor times an ``N/2 x N/2`` determinant of Meijer G values. For
truncations with even ``L_i`` those values reduce, through the three-term
contiguity relation, to boundary cases with closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import NotBoundary, OddTruncation, OutOfRange, ValidationError, ZeroDivisor
from .exactnum.poly import det_bareiss
from .exactnum.symbolic import SymbolicValue, gamma_exact

__all__ = [
    "MeijerSpec",
    "ProductSpec",
    "g_recurrence_step",
    "g_boundary_eval",
    "g_evaluate",
    "g_numeric",
    "g_mellin_barnes",
    "alpha_spec",
    "alpha_truncated",
    "g33_closed_form",
    "g22_ginibre",
    "prob_all_real",
    "symbolic_det",
]

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class MeijerSpec:
    """``G^{m,n}_{p,q}(a_1..a_p; b_1..b_q | 1)``."""

    upper: tuple
    lower: tuple
    m: int
    n: int

    def __post_init__(self):
        object.__setattr__(self, "upper", tuple(Fraction(x) for x in self.upper))
        object.__setattr__(self, "lower", tuple(Fraction(x) for x in self.lower))
        if not (0 <= self.m <= self.q and 0 <= self.n <= self.p):
            raise ValidationError("Meijer indices must satisfy m <= q, n <= p")

    @property
    def p(self) -> int:
        return len(self.upper)

    @property
    def q(self) -> int:
        return len(self.lower)

    def __str__(self):
        fmt = lambda xs: ",".join(str(x) for x in xs)  # noqa: E731
        return f"G^{{{self.m},{self.n}}}_{{{self.p},{self.q}}}({fmt(self.upper)}; {fmt(self.lower)} | 1)"


@dataclass(frozen=True)
class ProductSpec:
    """``m`` factors of size ``N`` (even); ``L`` empty for Ginibre factors."""

    m: int
    N: int
    L: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "L", tuple(int(x) for x in self.L))
        if self.m < 1:
            raise ValidationError("m must be >= 1")
        if self.N < 2 or self.N % 2:
            raise ValidationError("N must be a positive even integer")
        if self.L and len(self.L) != self.m:
            raise ValidationError(f"expected {self.m} truncation sizes, got {len(self.L)}")
        if any(x < 0 for x in self.L):
            raise ValidationError("truncation sizes must be nonnegative")


# --------------------------------------------------------------------------
# Generic contiguity step and boundary patterns
# --------------------------------------------------------------------------

def g_recurrence_step(spec: MeijerSpec):
    """``G = (G[a_p - 1] + G[b_q + 1]) / (a_p - b_q - 1)``.

    Returns
    -------
    (MeijerSpec, MeijerSpec, Fraction)
    """
    if not (spec.n < spec.p and spec.m < spec.q):
        raise ValidationError("the contiguity relation needs n < p and m < q")
    ap, bq = spec.upper[-1], spec.lower[-1]
    div = ap - bq - 1
    if div == 0:
        raise ZeroDivisor(f"a_p - b_q - 1 vanishes for {spec}")
    A = MeijerSpec(spec.upper[:-1] + (ap - 1,), spec.lower, spec.m, spec.n)
    B = MeijerSpec(spec.upper, spec.lower[:-1] + (bq + 1,), spec.m, spec.n)
    return A, B, div


def _parse_family(spec: MeijerSpec):
    """Match ``G^{M+1,M}_{2M+1,2M+1}(c..c; 1, k+u_i ; 0, k..k ; c-w_i)``, ``c = 3/2 - j``.

    Returns ``(j, k, u, w)`` with integer offset tuples, or None.
    """
    M = spec.n
    if spec.m != M + 1 or spec.p != 2 * M + 1 or spec.q != 2 * M + 1 or M < 1:
        return None
    c_vals = set(spec.upper[:M])
    if len(c_vals) != 1:
        return None
    c = c_vals.pop()
    j = Fraction(3, 2) - c
    if spec.lower[0] != 0:
        return None
    k_vals = set(spec.lower[1 : M + 1])
    if len(k_vals) != 1:
        return None
    k = k_vals.pop()
    rest = list(spec.upper[M:])
    if Fraction(1) not in rest:
        return None
    rest.remove(Fraction(1))
    u = [x - k for x in rest]
    w = [c - x for x in spec.lower[M + 1 :]]
    if any(x.denominator != 1 or x < 0 for x in u + w):
        return None
    if j.denominator != 1 or k.denominator != 1 or j < 1 or k < 1:
        return None
    return int(j), int(k), tuple(int(x) for x in u), tuple(int(x) for x in w)


def g_boundary_eval(spec: MeijerSpec) -> SymbolicValue:
    """Closed-form boundary values.

    * lower offsets all zero, upper offsets not all zero: ``0``;
    * upper offsets all zero, lower offsets ``l_i`` not all zero:
      ``prod_i Gamma(j - 1/2) / Gamma(j - 1/2 + l_i)``.
    """
    parsed = _parse_family(spec)
    if parsed is None:
        raise NotBoundary(f"{spec} is outside the supported family")
    j, _, u, w = parsed
    return _boundary(j, u, w)


def _boundary(j, u, w):
    if not any(w) and any(u):
        return SymbolicValue()
    if not any(u) and any(w):
        out = Fraction(1)
        for li in w:
            # Gamma(j-1/2)/Gamma(j-1/2+l) = 1/(j-1/2)_l
            for t in range(li):
                out /= j - HALF + t
        return SymbolicValue.rational(out)
    raise NotBoundary(f"offsets u={u}, w={w} match no boundary pattern")


@lru_cache(maxsize=None)
def _family_value(j: int, k: int, u: tuple, w: tuple) -> Fraction:
    if not any(u) or not any(w):
        return _boundary(j, u, w).as_rational()
    # reduce the largest offsets first; the divisor k+j+u+w-5/2 never vanishes
    i = max(range(len(u)), key=lambda t: u[t])
    l = max(range(len(w)), key=lambda t: w[t])
    div = k + j + u[i] + w[l] - Fraction(5, 2)
    ua = tuple(sorted(u[:i] + (u[i] - 1,) + u[i + 1 :]))
    wb = tuple(sorted(w[:l] + (w[l] - 1,) + w[l + 1 :]))
    return (_family_value(j, k, ua, w) + _family_value(j, k, u, wb)) / div


def g_evaluate(spec: MeijerSpec) -> SymbolicValue:
    """Evaluate a family member exactly by recurrence down to the boundary."""
    parsed = _parse_family(spec)
    if parsed is None:
        raise NotBoundary(f"{spec} is outside the supported family")
    j, k, u, w = parsed
    if not any(u) and not any(w):
        raise NotBoundary("all offsets vanish; the value is not determined by the boundary data")
    return SymbolicValue.rational(_family_value(j, k, tuple(sorted(u)), tuple(sorted(w))))


def alpha_spec(j: int, k: int, L) -> MeijerSpec:
    M = len(L)
    c = Fraction(3, 2) - j
    upper = (c,) * M + (Fraction(1),) + tuple(Fraction(x, 2) + k for x in L)
    lower = (Fraction(0),) + (Fraction(k),) * M + tuple(c - Fraction(x, 2) for x in L)
    return MeijerSpec(upper, lower, M + 1, M)


def alpha_truncated(j: int, k: int, L) -> SymbolicValue:
    return g_evaluate(alpha_spec(j, k, L))


def g_numeric(spec: MeijerSpec, dps: int = 30):
    """High-precision numerical value via :func:`mpmath.meijerg` (oracle only)."""
    import mpmath

    with mpmath.workdps(dps):
        f = lambda x: mpmath.mpf(x.numerator) / x.denominator  # noqa: E731
        a = [[f(x) for x in spec.upper[: spec.n]], [f(x) for x in spec.upper[spec.n :]]]
        b = [[f(x) for x in spec.lower[: spec.m]], [f(x) for x in spec.lower[spec.m :]]]
        return mpmath.meijerg(a, b, 1)


# --------------------------------------------------------------------------
# Ginibre factors
# --------------------------------------------------------------------------

def g33_closed_form(j: int, k: int) -> SymbolicValue:
    """``G^{3,2}_{3,3}(5/2-j, 5/2-j, 2; 1, 1+k, 1+k | 1)`` as ``pi^2`` times a rational."""
    if j < 1 or k < 1:
        raise ValidationError("j, k must be >= 1")
    f = math.factorial
    s = Fraction(0)
    for mu in range(k):
        num = f(2 * mu + 2 * j - 2) ** 2
        den = f(mu) * f(mu + j - 1) ** 2 * f(mu + 2 * j + k - 2)
        s += Fraction(num, den) * Fraction(16) ** (2 - mu - 2 * j - k)
    pref = Fraction(f(k - 1) * f(2 * j + 2 * k - 2) ** 2, f(j + k - 1) ** 2)
    return SymbolicValue.pi_power(4, pref * s)


def g22_ginibre(j: int, k: int) -> SymbolicValue:
    """``G^{2,1}_{2,2}(5/2-j, 2; 1, 1+k | 1)``.

    Equals ``Gamma(j+k-1/2) * 2 int_0^{1/sqrt2} v^(2j-2) (1-v^2)^(k-1) dv``.
    """
    total = SymbolicValue()
    r = SymbolicValue.sqrt_rational(HALF)
    for i in range(k):
        e = 2 * j - 1 + 2 * i
        total = total + r**e * Fraction(math.comb(k - 1, i) * (-1) ** i * 2, e)
    return gamma_exact(j + k - HALF) * total


# --------------------------------------------------------------------------
# Determinants and probabilities
# --------------------------------------------------------------------------

def _cofactor_det(M):
    n = len(M)
    if n == 1:
        return M[0][0]
    total = SymbolicValue()
    for c in range(n):
        if not M[0][c]:
            continue
        minor = [row[:c] + row[c + 1 :] for row in M[1:]]
        term = M[0][c] * _cofactor_det(minor)
        total = total + term if c % 2 == 0 else total - term
    return total


def symbolic_det(M) -> SymbolicValue:
    """Exact determinant of a square matrix of :class:`SymbolicValue` entries.

    When every nonzero entry is a multiple of one basis monomial that monomial
    is factored out and fraction-free elimination runs on the rationals;
    otherwise cofactor expansion (adequate for the sizes used here).
    """
    n = len(M)
    keys = set()
    for row in M:
        for x in row:
            x = SymbolicValue.coerce(x)
            if not x:
                continue
            sm = x.single_monomial()
            keys.add(sm[0] if sm else None)
    if len(keys) == 1 and None not in keys:
        key = keys.pop()
        rat = [[SymbolicValue.coerce(x).coefficient(key) for x in row] for row in M]
        d = det_bareiss(rat)
        unit = SymbolicValue({key: 1})
        return (unit**n) * Fraction(d)
    return _cofactor_det([[SymbolicValue.coerce(x) for x in row] for row in M])


def _truncation_prefactor(N: int, L) -> Fraction:
    out = SymbolicValue.rational(1)
    for Li in L:
        for s in range(N):
            out = out * gamma_exact(Fraction(Li + 1 + s, 2)) / gamma_exact(Fraction(s + 1, 2))
    return out.as_rational()


def prob_all_real(spec: ProductSpec) -> SymbolicValue:
    """Probability that the product of ``m`` real ``N x N`` factors has a real spectrum.

    Ginibre factors are supported for ``m <= 2``; truncated orthogonal
    factors for any ``m <= 3`` with even ``L_i``.
    """
    m, N = spec.m, spec.N
    if N > 8 or m > 3:
        raise OutOfRange("exact evaluation is limited to N <= 8 and m <= 3")
    half = N // 2
    if spec.L:
        if any(x % 2 for x in spec.L):
            raise OddTruncation("odd truncation sizes are outside the exact family")
        if not any(spec.L):
            raise ValidationError("L = 0 gives a square orthogonal factor; probability is not from this family")
        M = [[alpha_truncated(jj, kk, spec.L) for kk in range(1, half + 1)]
             for jj in range(1, half + 1)]
        det = symbolic_det(M)
        return det * _truncation_prefactor(N, spec.L)
    if m == 1:
        entries = g22_ginibre
    elif m == 2:
        entries = g33_closed_form
    else:
        raise OutOfRange("Ginibre products with m >= 3 have no implemented closed form")
    M = [[entries(jj, kk) for kk in range(1, half + 1)] for jj in range(1, half + 1)]
    pref = SymbolicValue.rational(1)
    for jj in range(1, N + 1):
        pref = pref * gamma_exact(Fraction(jj, 2))
    return symbolic_det(M) / (pref**m)


def g_mellin_barnes(spec: MeijerSpec, c, dps: int = 25):
    """Numerical ``G(1)`` by quadrature along the vertical line ``Re u = c``.

    ``c`` must separate the poles of ``Gamma(b_j + u)`` (left) from those of
    ``Gamma(1 - a_j - u)`` (right). Used as an oracle where the hypergeometric
    series of :func:`g_numeric` degenerates.
    """
    import mpmath

    with mpmath.workdps(dps):
        f = lambda x: mpmath.mpf(x.numerator) / x.denominator  # noqa: E731
        a = [f(x) for x in spec.upper]
        b = [f(x) for x in spec.lower]
        c = f(Fraction(c))

        def integrand(y):
            u = mpmath.mpc(c, y)
            num = mpmath.fprod(mpmath.gamma(b[i] + u) for i in range(spec.m))
            num *= mpmath.fprod(mpmath.gamma(1 - a[i] - u) for i in range(spec.n))
            den = mpmath.fprod(mpmath.gamma(1 - b[i] - u) for i in range(spec.m, spec.q))
            den *= mpmath.fprod(mpmath.gamma(a[i] + u) for i in range(spec.n, spec.p))
            return num / den

        val = mpmath.quad(integrand, [-mpmath.inf, -10, 0, 10, mpmath.inf]) / (2 * mpmath.pi)
        return val.real
