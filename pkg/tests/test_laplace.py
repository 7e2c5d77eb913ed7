from fractions import Fraction

import mpmath
import numpy as np
import pytest
from scipy import integrate

from rmt_exact.exactnum import PiecewisePuiseux, SymbolicValue, piecewise_moment
from rmt_exact.laplace import LaplacePrefactor, conductance_pdf, invert, invert_term, selberg
from rmt_exact.recursion import EnsembleParams, q_laguerre
from rmt_exact.verify import forward_laplace_error, reference_conductance

F = Fraction
ONE = SymbolicValue.rational(1)


def test_invert_step():
    assert invert_term(ONE, 0, 0, False, 1).terms == {(0, 0, 0): ONE}


def test_invert_shifted_power():
    got = invert_term(ONE, 0, 2, False, F(5, 2))
    coef = SymbolicValue.pi_power(-1, F(4, 3))  # 1/Gamma(5/2)
    assert got.terms == {(2, 2, 3): coef}


@pytest.mark.parametrize("s", [0.5, 1.0, 3.0])
def test_invert_erf_family_forward_transform(s):
    # the support is a surrogate; past t = 1/2 the inverse is a polynomial
    f = invert_term(ONE, 0, 0, True, F(7, 2)).with_support((0, 10**6))
    with mpmath.workdps(30):
        bps = sorted({0, *[b for b in f.breakpoints()], 2})
        lhs = mpmath.quad(lambda t: mpmath.exp(-s * t) * f.evaluate(t, 30), bps + [mpmath.inf])
        rhs = mpmath.erf(mpmath.sqrt(mpmath.mpf(s) / 2)) * mpmath.mpf(s) ** mpmath.mpf(-3.5)
        assert abs(lhs - rhs) <= 1e-9 * abs(rhs)


def test_selberg_small_cases():
    assert selberg(1, 1, 1, 1) == SymbolicValue.rational(1)
    assert selberg(2, 1, 1, 1) == SymbolicValue.rational(F(1, 6))
    # int_0^1 x^(1/2) dx = 2/3
    assert selberg(1, F(3, 2), 1, 1) == SymbolicValue.rational(F(2, 3))


def test_prefactor_for_the_goe_triple():
    pre = LaplacePrefactor.for_params(EnsembleParams(N=3, beta=1, atilde=F(0)))
    assert pre.gamma == 6
    assert pre.K == SymbolicValue.rational(F(15, 32))


def test_uniform_single_channel():
    got = conductance_pdf(EnsembleParams.from_channels(1, 1, 2))
    assert got == PiecewisePuiseux({(0, 0, 0): 1, (1, 1, 0): -1}, support=(0, 1))


def test_goe_closed_forms():
    assert conductance_pdf(EnsembleParams(N=3, beta=1, atilde=F(0))) == reference_conductance(0)
    half = conductance_pdf(EnsembleParams(N=3, beta=1, atilde=F(-1, 2)))
    assert half == reference_conductance(F(-1, 2))
    assert (2, 2, 5) in half.terms


GRID = [(b, N, F(a)) for b in (1, 2, 4) for N in (1, 2, 3) for a in (0, 1, 2)] + [
    (1, N, F(-1, 2)) for N in (1, 2, 3)] + [(1, 2, F(1, 2))]


@pytest.mark.parametrize("beta,N,atilde", GRID)
def test_pdf_normalized_with_zero_tail(beta, N, atilde):
    pdf = conductance_pdf(EnsembleParams(N=N, beta=beta, atilde=atilde))
    assert piecewise_moment(pdf, 0) == ONE
    assert pdf.support == (0, N)
    assert pdf.tail_vanishes()


@pytest.mark.parametrize("beta,N,atilde", [(2, 2, F(0)), (1, 3, F(-1, 2)), (4, 2, F(1)), (1, 2, F(0))])
def test_forward_laplace_consistency(beta, N, atilde):
    p = EnsembleParams(N=N, beta=beta, atilde=atilde)
    pre = LaplacePrefactor.for_params(p)
    pdf, Q = conductance_pdf(p), q_laguerre(p)
    for s in (0.3, 1.7, 4.2):
        assert forward_laplace_error(pdf, Q, pre.gamma, pre.S, beta, s) <= 1e-8


def test_mean_conductance_numeric():
    pdf = conductance_pdf(EnsembleParams.from_channels(2, 2, 2))
    num = integrate.quad(lambda t: t * pdf.evaluate_array(np.array([t]))[0], 0, 2, points=[1])[0]
    assert abs(float(piecewise_moment(pdf, 1).evalf(20)) - num) < 1e-12


def test_invert_is_linear():
    p = EnsembleParams(N=2, beta=2, atilde=F(0))
    pre = LaplacePrefactor.for_params(p)
    Q = q_laguerre(p)
    assert invert(Q + Q, pre.gamma).terms == (invert(Q, pre.gamma) * 2).terms
