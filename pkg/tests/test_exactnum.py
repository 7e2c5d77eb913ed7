from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from rmt_exact.errors import BasisError, UnsupportedTerm
from rmt_exact.exactnum import (
    ErfExpoSum,
    PiecewisePuiseux,
    SymbolicValue,
    UniPoly,
    antiderive_on_interval,
    det_bareiss,
    differentiate,
    gamma_exact,
    piecewise_moment,
    symbolic_equal,
)

F = Fraction
E = ErfExpoSum
SQRT_2PI = SymbolicValue.pi_power(1) * SymbolicValue.sqrt_rational(2)


# -- SymbolicValue ---------------------------------------------------------------

def test_rational_arithmetic_is_exact():
    a = SymbolicValue.rational(F(1, 3))
    assert (a + a + a).as_rational() == 1
    assert (a * 3).is_rational()


def test_pi_exponents_add():
    p = SymbolicValue.pi_power(1) * SymbolicValue.pi_power(3)
    assert p == SymbolicValue.pi_power(4)


def test_sqrt_rational_squarefree():
    v = SymbolicValue.sqrt_rational(F(8, 3))
    assert abs(float(v.evalf(30)) - (8 / 3) ** 0.5) < 1e-15
    assert (v * v).as_rational() == F(8, 3)


def test_forbidden_log_products():
    with pytest.raises(BasisError):
        SymbolicValue.ln2() * SymbolicValue.ln2()
    with pytest.raises(BasisError):
        SymbolicValue.ln2() * SymbolicValue.euler_gamma()


def test_symbolic_equal_examples():
    assert symbolic_equal(E.constant(1) - E.term(1, 0, 1), -E.term(1, 0, 1) + E.constant(1))
    assert not symbolic_equal(SymbolicValue.pi_power(2, F(1, 4)), SymbolicValue.rational(F(22, 28)))
    assert symbolic_equal(SymbolicValue.ln2(0) + SymbolicValue.rational(F(1, 2)), SymbolicValue.rational(F(1, 2)))


def test_decimal_rendering_deterministic():
    v = SymbolicValue.pi_power(2, F(1, 4))
    assert v.to_decimal(20) == v.to_decimal(20)
    assert v.to_decimal(20) == "0.78539816339744830962"


@pytest.mark.parametrize("x", [F(1), F(5), F(1, 2), F(7, 2), F(11, 2)])
def test_gamma_exact_matches_mpmath(x):
    with mpmath.workdps(30):
        want = mpmath.gamma(mpmath.mpf(x.numerator) / x.denominator)
        assert abs(gamma_exact(x).evalf(30) - want) < mpmath.mpf(10) ** -25


# -- UniPoly ----------------------------------------------------------------------

def test_unipoly_divmod_roundtrip():
    a = UniPoly([F(1), F(2), F(3), F(4)])
    b = UniPoly([F(1), F(1)])
    q, r = a.divmod(b)
    assert q * b + r == a
    assert r.degree < b.degree


def test_zero_poly_degree_sentinel():
    assert UniPoly([F(0), F(0)]).degree == -1


def test_det_bareiss_rational():
    M = [[F(2), F(1), F(0)], [F(1), F(3), F(1)], [F(0), F(1), F(4)]]
    assert det_bareiss(M) == 18


# -- ErfExpoSum calculus ----------------------------------------------------------

def test_antiderive_exponential():
    assert antiderive_on_interval(E.term(1, 0, F(1, 2))) == 2 * E.constant(1) - 2 * E.term(1, 0, F(1, 2))


def test_antiderive_gaussian_substitution():
    assert antiderive_on_interval(E.term(1, -1, F(1, 2))) == E.term(SQRT_2PI, 0, 0, ((1, 1),))


def test_antiderive_linear_exponential():
    want = E.constant(1) - E.term(1, 0, 1) - E.term(1, 2, 1)
    assert antiderive_on_interval(E.term(1, 2, 1)) == want


def test_differentiate_examples():
    assert differentiate(E.term(1, 0, 1)) == -E.term(1, 0, 1)
    assert differentiate(E.term(SQRT_2PI, 0, 0, ((1, 1),))) == E.term(1, -1, F(1, 2))
    assert differentiate(E.term(1, 4)) == E.term(2, 2)


def test_antiderive_rejects_outside_closure():
    with pytest.raises(UnsupportedTerm):
        antiderive_on_interval(E.term(1, 1, 1, ((1, 1),)))


def test_numeric_evaluation_of_erf_term():
    f = E.term(SQRT_2PI, 0, 0, ((1, 1),))
    assert abs(float(f.evaluate(2.0)) - float(mpmath.sqrt(2 * mpmath.pi) * mpmath.erf(1))) < 1e-14


_rho = st.integers(0, 6).map(lambda k: F(k, 2))
_coef = st.fractions(min_value=-20, max_value=20, max_denominator=30).filter(bool)


@st.composite
def closed_terms(draw):
    c = draw(_coef)
    kind = draw(st.integers(0, 2))
    if kind == 0:
        return E.term(c, draw(st.integers(-1, 10)), draw(_rho))
    q = draw(st.integers(1, 3))
    if kind == 1:
        return E.term(c, 2 * draw(st.integers(0, 4)), draw(_rho), ((q, 1),))
    return E.term(c, 2 * draw(st.integers(0, 4)) + 1, F(q, 2), ((q, 1),))


@settings(max_examples=100, deadline=None)
@given(st.lists(closed_terms(), min_size=1, max_size=4))
def test_roundtrip_derivative_of_antiderivative(terms):
    f = sum(terms[1:], terms[0])
    assert differentiate(antiderive_on_interval(f)) == f


@settings(max_examples=50, deadline=None)
@given(closed_terms())
def test_antiderivative_vanishes_at_zero(f):
    g = antiderive_on_interval(f)
    assert g.value_at_zero().is_zero()


@settings(max_examples=25, deadline=None)
@given(closed_terms(), st.floats(0.1, 4.0))
def test_antiderivative_matches_quadrature(f, s):
    g = antiderive_on_interval(f)
    with mpmath.workdps(30):
        num = mpmath.quad(lambda x: f.evaluate(x, 30), [0, s])
        assert abs(g.evaluate(s, 30) - num) <= 1e-15 * max(1, abs(num))


# -- PiecewisePuiseux -------------------------------------------------------------

UNIFORM = PiecewisePuiseux({(0, 0, 0): 1, (1, 1, 0): -1}, support=(0, 1))


def test_uniform_moments():
    assert piecewise_moment(UNIFORM, 0) == SymbolicValue.rational(1)
    assert piecewise_moment(UNIFORM, 1) == SymbolicValue.rational(F(1, 2))


def test_evaluation_sums_only_started_terms():
    f = PiecewisePuiseux({(0, 0, 2): 1, (1, 1, 2): -2}, support=(0, 2))
    assert float(f.evaluate(F(1, 2))) == 0.5
    assert float(f.evaluate(F(3, 2))) == 1.5 - 2 * 0.5


def test_evaluate_array_matches_scalar():
    import numpy as np

    f = PiecewisePuiseux({(0, 0, 5): 2, (1, 1, 3): -1, (1, 0, 4): 3}, support=(0, 3))
    ts = np.linspace(0, 3, 31)
    got = f.evaluate_array(ts)
    want = [float(f.evaluate(F(t).limit_denominator(1000))) for t in ts]
    assert np.allclose(got, want, rtol=1e-12, atol=1e-12)


def test_antiderivative_differences_give_integrals():
    f = PiecewisePuiseux({(0, 0, 3): 1, (1, 1, 1): -1}, support=(0, 2))
    F_ = f.antiderivative()
    with mpmath.workdps(30):
        num = mpmath.quad(lambda t: f.evaluate(t), [0, 1, 2])
        assert abs(F_.evaluate(2) - num) < 1e-20


def test_restricted_drops_terms_at_the_end():
    f = PiecewisePuiseux({(0, 0, 0): 1, (1, 1, 0): -1}, support=(0, 1))
    assert (1, 1, 0) not in f.restricted().terms
    assert f.restricted() == f


def test_rescale():
    f = PiecewisePuiseux({(0, 0, 2): 1}, support=(0, 2))
    g = f.rescale(2)
    assert g.support == (0, 1)
    assert float(g.evaluate(F(1, 2))) == 1.0
