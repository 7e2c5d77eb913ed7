"""Fixed-trace (density-matrix) statistics for Hilbert-Schmidt and Bures-Hall measures.

Results for the fixed-trace ensemble follow from their Laguerre (Wishart)
counterparts: with ``D = nN`` the trace of an unconstrained complex Wishart
matrix is Gamma(D) distributed and independent of the normalized matrix, so a
Laguerre quantity ``e^{-y} y^p`` lifts to a Beta-type polynomial on the
simplex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, GammaResidue, PiResidue, ValidationError
from .exactnum.piecewise import PiecewisePuiseux
from .exactnum.poly import UniPoly, det_bareiss
from .exactnum.symbolic import SymbolicValue, gamma_exact

__all__ = [
    "BipartiteDims",
    "GapPolynomial",
    "gap_poly_wishart",
    "smallest_eig_pdf_hs",
    "density_hs",
    "polygamma_exact",
    "entanglement_means",
    "var_vn_bh",
    "distance_and_fidelity",
    "pochhammer_half",
]


@dataclass(frozen=True)
class BipartiteDims:
    """Subsystem dimensions ``N <= n``; ``a = n - N``."""

    N: int
    n: int

    def __post_init__(self):
        if not isinstance(self.N, int) or not isinstance(self.n, int):
            raise ValidationError("N and n must be integers")
        if self.N < 1 or self.n < self.N:
            raise ValidationError(f"need n >= N >= 1, got N={self.N}, n={self.n}")

    @property
    def a(self) -> int:
        return self.n - self.N


@dataclass(frozen=True)
class GapPolynomial:
    """``E_N(s; a) = e^{-N s} sum_l c_l s^l``.

    Attributes
    ----------
    N : int
    coeffs : tuple of Fraction
        ``c_0 .. c_{Na}`` with ``c_0 = 1``.
    """

    N: int
    coeffs: tuple

    @property
    def poly(self) -> UniPoly:
        return UniPoly(self.coeffs)

    @property
    def d(self) -> dict:
        """``d_l`` with ``-dE/ds = e^{-Ns} sum_l d_l s^(l-1)``."""
        P = self.poly
        f = P * self.N - P.derivative()
        return {l + 1: c for l, c in enumerate(f.coeffs) if c}

    def evaluate(self, s: float) -> float:
        return math.exp(-self.N * s) * float(sum(float(c) * s**l for l, c in enumerate(self.coeffs)))


def gap_poly_wishart(dims: BipartiteDims) -> GapPolynomial:
    """Probability of no eigenvalue in ``(0, s)`` for the complex Wishart ensemble.

    Shifting ``x -> x + s`` and applying the Andreief identity gives a Hankel
    determinant of moments ``M_jk(s) = int_0^inf x^(j+k) (x+s)^a e^{-x} dx``.
    """
    N, a = dims.N, dims.a
    M = [
        [
            UniPoly([math.comb(a, i) * math.factorial(j + k + i) for i in range(a, -1, -1)])
            for k in range(N)
        ]
        for j in range(N)
    ]
    det = det_bareiss(M)
    c0 = det[0]
    coeffs = tuple(Fraction(c) / c0 for c in det.coeffs)
    return GapPolynomial(N=N, coeffs=coeffs)


def _poly_times_power(prefix_power: int, base_coeff: Fraction, power: int, scale=1) -> dict:
    """Coefficients of ``scale * x^prefix_power (1 + base_coeff x)^power``."""
    out = {}
    for i in range(power + 1):
        out[prefix_power + i] = Fraction(scale) * math.comb(power, i) * base_coeff**i
    return out


def _poly_to_piecewise(coeffs: dict, support) -> PiecewisePuiseux:
    return PiecewisePuiseux({(0, 0, 2 * p): c for p, c in coeffs.items() if c}, support=support, var="x")


def smallest_eig_pdf_hs(dims: BipartiteDims) -> PiecewisePuiseux:
    """Exact PDF of the smallest eigenvalue under the Hilbert-Schmidt measure.

    ``f(x) = Gamma(D) sum_j d_j x^(j-1) (1 - N x)^(D-j-1) / Gamma(D-j)`` on
    ``[0, 1/N]`` with ``D = nN``.
    """
    if dims.N < 2:
        raise ValidationError("the smallest-eigenvalue PDF needs N >= 2")
    D = dims.n * dims.N
    gD = math.factorial(D - 1)
    total = {}
    for j, dj in dims_gap(dims).d.items():
        scale = dj * Fraction(gD, math.factorial(D - j - 1))
        for p, c in _poly_times_power(j - 1, Fraction(-dims.N), D - j - 1, scale).items():
            total[p] = total.get(p, 0) + c
    return _poly_to_piecewise(total, (0, Fraction(1, dims.N)))


def dims_gap(dims: BipartiteDims) -> GapPolynomial:
    return gap_poly_wishart(dims)


def _laguerre(k: int, a: int) -> UniPoly:
    return UniPoly(
        [Fraction((-1) ** i * math.comb(k + a, k - i), math.factorial(i)) for i in range(k + 1)],
        var="y",
    )


def lue_density_poly(dims: BipartiteDims) -> UniPoly:
    """``r(y)`` with LUE one-point density ``e^{-y} r(y)`` for weight ``y^a e^{-y}``."""
    N, a = dims.N, dims.a
    acc = UniPoly([], var="y")
    for k in range(N):
        L = _laguerre(k, a)
        acc = acc + L * L * Fraction(math.factorial(k), math.factorial(k + a))
    return acc * UniPoly.monomial(a, 1, var="y")


def density_hs(dims: BipartiteDims) -> PiecewisePuiseux:
    """Exact one-point density of the Hilbert-Schmidt measure on ``(0, 1)``.

    Normalized to ``N`` (counting density).
    """
    N = dims.N
    if N < 2:
        raise ValidationError("density_hs needs N >= 2")
    D = dims.n * N
    gD = math.factorial(D - 1)
    total = {}
    for p, rp in enumerate(lue_density_poly(dims).coeffs):
        if not rp:
            continue
        # y^p e^{-y}  ->  Gamma(D) x^p (1-x)^(D-p-2) / Gamma(D-p-1)
        scale = rp * Fraction(gD, math.factorial(D - p - 2))
        for q, c in _poly_times_power(p, Fraction(-1), D - p - 2, scale).items():
            total[q] = total.get(q, 0) + c
    return _poly_to_piecewise(total, (0, 1))


# --------------------------------------------------------------------------
# Polygamma values and entanglement statistics
# --------------------------------------------------------------------------

def polygamma_exact(kind: str, arg) -> SymbolicValue:
    """Digamma or trigamma at a positive integer or half-integer.

    Euler's constant is carried symbolically and must cancel in user-facing
    results.
    """
    x = Fraction(arg)
    if x <= 0 or (2 * x).denominator != 1:
        raise DomainError(f"polygamma_exact needs a positive (half-)integer, got {arg}")
    if kind == "digamma":
        if x.denominator == 1:
            h = sum((Fraction(1, k) for k in range(1, int(x))), Fraction(0))
            return SymbolicValue.euler_gamma(-1) + h
        m = int(x - Fraction(1, 2))
        h = sum((Fraction(2, 2 * k - 1) for k in range(1, m + 1)), Fraction(0))
        return SymbolicValue.euler_gamma(-1) + SymbolicValue.ln2(-2) + h
    if kind == "trigamma":
        if x.denominator == 1:
            h = sum((Fraction(1, k * k) for k in range(1, int(x))), Fraction(0))
            return SymbolicValue.pi_power(4, Fraction(1, 6)) - h
        m = int(x - Fraction(1, 2))
        h = sum((Fraction(4, (2 * k - 1) ** 2) for k in range(1, m + 1)), Fraction(0))
        return SymbolicValue.pi_power(4, Fraction(1, 2)) - h
    raise DomainError(f"unknown polygamma kind {kind!r}")


def _no_gamma(v: SymbolicValue) -> SymbolicValue:
    if v.gamma_coefficient():
        raise GammaResidue(f"Euler's constant survives in {v}")
    return v


def bh_purity_printed(dims: BipartiteDims) -> Fraction:
    """Mean BH purity with ``+(N^2 - 1)`` in the numerator.

    Exceeds 1 at ``n = N = 2`` and disagrees with sampling; kept for
    comparison only. :func:`entanglement_means` uses
    :func:`bh_purity_variance_form`.
    """
    n, N = dims.n, dims.N
    return Fraction(2 * n * (2 * n + N) + (N * N - 1), 2 * n * (2 * n * N - N * N + 2))


def bh_purity_variance_form(dims: BipartiteDims) -> Fraction:
    """Mean BH purity with ``-(N^2 - 1)``, the form inside the BH variance formula."""
    n, N = dims.n, dims.N
    return Fraction(2 * n * (2 * n + N) - (N * N - 1), 2 * n * (2 * n * N - N * N + 2))


def entanglement_means(measure: str, dims: BipartiteDims):
    """Mean von Neumann entropy ``-sum l ln l`` and mean purity ``sum l^2``.

    Parameters
    ----------
    measure : {"HS", "BH"}
    dims : BipartiteDims

    Returns
    -------
    (SymbolicValue, SymbolicValue)
    """
    n, N = dims.n, dims.N
    if measure == "HS":
        vn = (
            polygamma_exact("digamma", n * N + 1)
            - polygamma_exact("digamma", n + 1)
            - Fraction(N - 1, 2 * n)
        )
        purity = SymbolicValue.rational(Fraction(n + N, n * N + 1))
    elif measure == "BH":
        vn = polygamma_exact("digamma", n * N - Fraction(N * N, 2) + 1) - polygamma_exact(
            "digamma", n + Fraction(1, 2)
        )
        purity = SymbolicValue.rational(bh_purity_variance_form(dims))
    else:
        raise ValidationError(f"measure must be HS or BH, got {measure!r}")
    return _no_gamma(vn), purity


def purity_in_range(value, N: int) -> bool:
    """Whether a purity value lies in the admissible interval ``[1/N, 1]``."""
    v = Fraction(value.as_rational() if isinstance(value, SymbolicValue) else value)
    return Fraction(1, N) <= v <= 1


def var_vn_bh(dims: BipartiteDims) -> SymbolicValue:
    """Variance of the von Neumann entropy under the Bures-Hall measure."""
    n, N = dims.n, dims.N
    coef = Fraction(2 * n * (2 * n + N) - N * N + 1, 2 * n * (2 * n * N - N * N + 2))
    return -polygamma_exact("trigamma", n * N - Fraction(N * N, 2) + 1) + polygamma_exact(
        "trigamma", n + Fraction(1, 2)
    ) * coef


# --------------------------------------------------------------------------
# Distances and fidelities
# --------------------------------------------------------------------------

def pochhammer_half(u, sign: int = 1) -> SymbolicValue:
    """``(u)_{+-1/2} = Gamma(u +- 1/2) / Gamma(u)`` exactly."""
    u = Fraction(u)
    return gamma_exact(u + Fraction(sign, 2)) / gamma_exact(u)


def _odd_pi_free(v: SymbolicValue) -> SymbolicValue:
    for (k, d, l, g), c in v.items():
        if k % 2 or d != 1 or l or g:
            raise PiResidue(f"half-integer power of pi or radical survives in {v}")
    return v


def distance_and_fidelity(dims1: BipartiteDims, dims2: BipartiteDims):
    """Mean squared HS distance, mean root fidelity and mean fidelity.

    Returns
    -------
    (SymbolicValue, SymbolicValue, SymbolicValue)
        The first two are rational. The mean fidelity is ``1/N`` plus
        ``pi^2`` times a rational.
    """
    if dims1.N != dims2.N:
        raise ValidationError("both density matrices must share N")
    N, n1, n2 = dims1.N, dims1.n, dims2.n
    dist = SymbolicValue.rational(
        Fraction(N + n1, N * n1 + 1) + Fraction(N + n2, N * n2 + 1) - Fraction(2, N)
    )

    def block(j):
        return (
            pochhammer_half(j)
            * pochhammer_half(j + n1 - N)
            * pochhammer_half(j + n2 - N)
            * pochhammer_half(N - j + 1, -1)
        )

    blocks = {j: block(j) for j in range(1, N + 1)}
    s = SymbolicValue()
    for j in range(1, N + 1):
        s = s + blocks[j]
    pref = SymbolicValue.pi_power(-2, 2) / (pochhammer_half(N * n1) * pochhammer_half(N * n2))
    root_fid = _odd_pi_free(pref * s)
    if not root_fid.is_rational():
        raise PiResidue(f"mean root fidelity is not rational: {root_fid}")
    t = SymbolicValue()
    for j in range(1, N + 1):
        for k in range(j + 1, N + 1):
            d2 = Fraction((j - k) ** 2)
            t = t + blocks[j] * blocks[k] * (d2 / (d2 - Fraction(1, 4)))
    fid = SymbolicValue.rational(Fraction(1, N)) + t * SymbolicValue.pi_power(-4, Fraction(8, N * N * n1 * n2))
    return dist, root_fid, _odd_pi_free(fid)
