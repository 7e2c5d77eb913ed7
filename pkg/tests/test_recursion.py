from fractions import Fraction

import pytest

from rmt_exact.errors import TemplateViolation, ValidationError
from rmt_exact.exactnum import ErfExpoSum, SymbolicValue, antiderive_on_interval
from rmt_exact.recursion import (
    EnsembleParams,
    RecursionState,
    assemble_ode,
    check_template,
    ode_residual,
    q_bruteforce,
    q_laguerre,
    q_numeric,
    recurrence_step,
)

F = Fraction
E = ErfExpoSum
SQRT_2PI = SymbolicValue.pi_power(1) * SymbolicValue.sqrt_rational(2)


def test_first_step_is_the_running_integral():
    L0 = E.constant(1) - E.term(1, 0, 1)
    state = RecursionState(p=0, nu=1, alpha=0, lam=F(1), lam1=F(0))
    assert state.Dp == 0
    assert recurrence_step(state, L0, E.zero()) == antiderive_on_interval(L0)


def test_step_ignores_lpm1_when_dp_vanishes():
    L0 = E.constant(1) - E.term(1, 0, 1)
    state = RecursionState(p=0, nu=2, alpha=1, lam=F(1), lam1=F(0))
    assert recurrence_step(state, L0, E.zero()) == recurrence_step(state, L0, E.term(5, 3, 2))


def test_q_single_variable():
    assert q_laguerre(EnsembleParams(N=1, beta=2, atilde=F(0))) == E.constant(1) - E.term(1, 0, 1)
    assert q_laguerre(EnsembleParams(N=1, beta=1, atilde=F(-1, 2))) == E.term(SQRT_2PI, 0, 0, ((1, 1),))


def test_q_two_variables_gue():
    want = (E.constant(1) - E.term(1, 4, 1) - E.term(2, 0, 1) + E.term(1, 0, 2)) * 2
    assert q_laguerre(EnsembleParams(N=2, beta=2, atilde=F(0))) == want
    assert q_bruteforce(EnsembleParams(N=2, beta=2, atilde=F(0))) == want


@pytest.mark.parametrize("s", [0.5, 1.0, 2.0])
def test_bruteforce_matches_quadrature(s):
    p = EnsembleParams(N=2, beta=2, atilde=F(0))
    assert abs(float(q_bruteforce(p).evaluate(s)) - q_numeric(p, s)) <= 1e-10


@pytest.mark.parametrize("beta,atilde", [(1, 0), (2, 1), (4, 2), (2, 3)])
def test_single_variable_oracles_agree(beta, atilde):
    p = EnsembleParams(N=1, beta=beta, atilde=F(atilde))
    assert q_laguerre(p) == q_bruteforce(p)


def test_half_integer_three_variables_numeric():
    p = EnsembleParams(N=3, beta=1, atilde=F(-1, 2))
    exact = float(q_laguerre(p).evaluate(1.0))
    assert abs(exact - q_numeric(p, 1.0)) <= 1e-8 * abs(exact)


@pytest.mark.parametrize("N", [1, 2, 3, 4])
def test_half_integer_template(N):
    check_template(q_laguerre(EnsembleParams(N=N, beta=1, atilde=F(-1, 2))), N)


def test_template_rejects_foreign_terms():
    with pytest.raises(TemplateViolation):
        check_template(E.term(1, 0, 0, ((2, 1),)), 1)
    with pytest.raises(TemplateViolation):
        check_template(E.term(1, 2, F(1, 2)), 1)


def test_assemble_ode_nu3_matrices():
    A, B = assemble_ode(3, F(1), F(0), 0)
    assert A == [[-3, 0, 0, 0], [3, -2, 0, 0], [0, 4, -1, 0], [0, 0, 3, 0]]
    assert B == [[9, 3, 0, 0], [0, 4, 2, 0], [0, 0, 1, 1], [0, 0, 0, 0]]


@pytest.mark.parametrize("nu", [1, 2, 3, 5])
def test_assemble_ode_structure(nu):
    A, B = assemble_ode(nu, F(1, 2), F(1), 1)
    assert len(A) == nu + 1
    assert all(row[-1] == 0 for row in A)
    assert all(v == 0 for v in B[-1])


@pytest.mark.parametrize("beta,atilde", [(2, 0), (1, 0), (1, F(-1, 2)), (4, 1)])
def test_chains_satisfy_the_ode(beta, atilde):
    trace = []
    q_laguerre(EnsembleParams(N=4, beta=beta, atilde=F(atilde)), trace=trace)
    assert any(nu == 3 for nu, _, _ in trace)
    for nu, alpha, chain in trace:
        if nu == 0:
            continue
        for r in ode_residual(chain, F(beta, 2), F(atilde), alpha):
            assert r.is_zero()


def test_channels_to_weight_exponent():
    assert EnsembleParams.atilde_from(3, 3, 1) == F(-1, 2)
    assert EnsembleParams.atilde_from(4, 3, 1) == 0
    assert EnsembleParams.from_channels(2, 3, 2).atilde == 1


@pytest.mark.parametrize("kw", [dict(N=0, beta=2, atilde=F(0)), dict(N=2, beta=3, atilde=F(0)),
                                dict(N=2, beta=2, atilde=F(-2))])
def test_invalid_params(kw):
    with pytest.raises(ValidationError):
        EnsembleParams(**kw)
