from fractions import Fraction

import pytest

from rmt_exact.errors import OddTruncation, OutOfRange, ValidationError
from rmt_exact.exactnum import SymbolicValue
from rmt_exact.meijerg import (
    MeijerSpec,
    ProductSpec,
    alpha_spec,
    g22_ginibre,
    g33_closed_form,
    g_boundary_eval,
    g_evaluate,
    g_mellin_barnes,
    g_numeric,
    g_recurrence_step,
    prob_all_real,
)

F = Fraction
R = SymbolicValue.rational


def test_recurrence_step_structure():
    spec = alpha_spec(1, 1, (2, 2))
    A, B, div = g_recurrence_step(spec)
    assert A.upper[:-1] == spec.upper[:-1] and A.upper[-1] == spec.upper[-1] - 1
    assert A.lower == spec.lower
    assert B.lower[:-1] == spec.lower[:-1] and B.lower[-1] == spec.lower[-1] + 1
    assert B.upper == spec.upper
    assert div == spec.upper[-1] - spec.lower[-1] - 1


def test_recurrence_needs_free_slots():
    with pytest.raises(ValidationError):
        g_recurrence_step(MeijerSpec((1,), (0,), 1, 0))


@pytest.mark.parametrize("j,k,L", [(1, 1, (2, 2)), (1, 2, (4, 4)), (2, 1, (4, 6)), (2, 2, (2, 4))])
def test_truncated_values_against_numeric(j, k, L):
    spec = alpha_spec(j, k, L)
    exact = float(g_evaluate(spec).evalf(30))
    assert abs(exact - float(g_numeric(spec))) <= 1e-10 * abs(exact)


def test_boundary_zero_pattern():
    # upper offsets present, lower offsets all zero
    spec = MeijerSpec((F(1, 2), F(1), F(2)), (F(0), F(1), F(1, 2)), 2, 1)
    assert g_boundary_eval(spec) == R(0)


def test_boundary_product_pattern():
    # j = 1, a single lower offset l = 1: Gamma(1/2) / Gamma(3/2) = 2
    spec = MeijerSpec((F(1, 2), F(1), F(1)), (F(0), F(1), F(-1, 2)), 2, 1)
    assert g_boundary_eval(spec) == R(2)


def test_g33_base_case():
    assert g33_closed_form(1, 1) == SymbolicValue.pi_power(4, F(1, 4))


@pytest.mark.parametrize("j,k", [(1, 1), (1, 3), (2, 1), (2, 3), (3, 2), (4, 4)])
def test_g33_against_mellin_barnes(j, k):
    spec = MeijerSpec((F(5, 2) - j, F(5, 2) - j, 2), (1, 1 + k, 1 + k), 3, 2)
    c = F(j) - F(3, 2) - F(1, 4)  # between the two pole families
    exact = float(g33_closed_form(j, k).evalf(30))
    assert abs(exact - float(g_mellin_barnes(spec, c))) <= 1e-8 * abs(exact)


@pytest.mark.parametrize("j,k", [(1, 1), (2, 2), (3, 4)])
def test_g33_is_pi_squared_times_rational(j, k):
    v = g33_closed_form(j, k)
    assert (v * SymbolicValue.pi_power(-4)).is_rational()


@pytest.mark.parametrize("j,k", [(1, 1), (2, 1), (2, 3)])
def test_g22_against_numeric(j, k):
    spec = MeijerSpec((F(5, 2) - j, 2), (1, 1 + k), 2, 1)
    exact = float(g22_ginibre(j, k).evalf(30))
    assert abs(exact - float(g_numeric(spec))) <= 1e-10 * abs(exact)


@pytest.mark.parametrize("L,want", [
    ((), SymbolicValue.pi_power(2, F(1, 4))),
    ((2, 2), R(F(20, 27))),
    ((4, 4), R(F(97984, 128625))),
    ((4, 6), R(F(649984, 848925))),
])
def test_two_factor_probabilities(L, want):
    assert prob_all_real(ProductSpec(m=2, N=2, L=L)) == want


@pytest.mark.parametrize("N", [2, 4, 6])
def test_single_ginibre(N):
    # a single real Ginibre matrix: 2^{-N(N-1)/4}
    want = SymbolicValue.rational_power(2, F(-N * (N - 1), 4))
    assert prob_all_real(ProductSpec(m=1, N=N)) == want


def test_probability_is_a_probability():
    for spec in (ProductSpec(2, 4), ProductSpec(3, 2, (2, 2, 2)), ProductSpec(1, 2, (2,))):
        v = float(prob_all_real(spec).evalf(20))
        assert 0 < v < 1


def test_out_of_scope_inputs():
    with pytest.raises(OutOfRange):
        prob_all_real(ProductSpec(3, 2))
    with pytest.raises(OddTruncation):
        prob_all_real(ProductSpec(2, 2, (1, 2)))
    with pytest.raises(ValidationError):
        ProductSpec(2, 3)
    with pytest.raises(ValidationError):
        ProductSpec(2, 2, (2,))
