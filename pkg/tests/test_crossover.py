import math

import numpy as np
import pytest
from scipy import integrate

from rmt_exact.crossover import (
    ENDPOINT_OFFSET,
    CrossoverParams,
    eigvec_cdf_table,
    eigvec_component_pdf,
    eigvec_moment,
    ratio_cdf,
    ratio_cdf_function,
    ratio_fractional_moment,
    ratio_pdf,
)
from rmt_exact.errors import Divergent, DomainError, ValidationError


def _goe_ratio(r):
    # N = 3 GOE spacing-ratio law, normalized numerically below
    return (r + r * r) / (1 + r + r * r) ** 2.5


def _gue_ratio(r):
    return (r + r * r) ** 2 / (1 + r + r * r) ** 4


@pytest.mark.parametrize("alpha", [0.1, 0.5, 0.9])
def test_ratio_normalized(alpha):
    p = CrossoverParams(alpha=alpha)
    total = sum(integrate.quad(lambda r: ratio_pdf(p, r), lo, hi, epsabs=1e-13, epsrel=1e-12, limit=400)[0]
                for lo, hi in [(0, 1), (1, 5), (5, 50), (50, np.inf)])
    assert abs(total - 1) < 1e-8


@pytest.mark.parametrize("r", [1 / 3, 0.5, 2.0, 3.0])
def test_ratio_duality(r):
    p = CrossoverParams(alpha=0.5)
    assert abs(ratio_pdf(p, r) * r * r - ratio_pdf(p, 1 / r)) < 1e-10


@pytest.mark.parametrize("alpha,law", [(0.0, _goe_ratio), (1.0, _gue_ratio)])
def test_endpoints_approach_pure_ensembles(alpha, law):
    Z = integrate.quad(law, 0, np.inf)[0]
    p = CrossoverParams(alpha=alpha)
    rs = np.array([0.2, 0.7, 1.0, 1.8, 4.0])
    got = np.array([ratio_pdf(p, r) for r in rs])
    # the closed form is evaluated one offset away from the endpoint
    assert np.allclose(got, law(rs) / Z, rtol=1e-2, atol=1e-3)


def test_ratio_cdf_function_matches_quadrature():
    p = CrossoverParams(alpha=0.4)
    cdf = ratio_cdf_function(p)
    rs = np.array([0.1, 0.5, 1.0, 2.0, 7.0])
    assert np.allclose(cdf(rs), ratio_cdf(p, rs), atol=1e-5)
    assert cdf(np.array([-1.0, 0.0]))[0] == 0.0


def test_moments():
    p = CrossoverParams(alpha=0.5)
    assert abs(ratio_fractional_moment(p, 0) - 1) < 1e-8
    assert abs(ratio_fractional_moment(p, 1) - ratio_fractional_moment(p, -1)) < 1e-8


def test_moment_windows():
    with pytest.raises(Divergent):
        ratio_fractional_moment(CrossoverParams(alpha=0.5), 3.0)
    with pytest.raises(Divergent):
        ratio_fractional_moment(CrossoverParams(alpha=0.0), 2.0)
    assert math.isfinite(ratio_fractional_moment(CrossoverParams(alpha=0.5), 2.5))


def test_param_validation():
    with pytest.raises(ValidationError):
        CrossoverParams(alpha=1.5)
    with pytest.raises(ValidationError):
        CrossoverParams(alpha=0.5, epsilon=-1.0)
    with pytest.raises(DomainError):
        ratio_pdf(CrossoverParams(alpha=0.5), 0.0)
    assert CrossoverParams(alpha=0.1, N=400).epsilon == pytest.approx(4.0)
    assert CrossoverParams(alpha=0.0).alpha_eff == ENDPOINT_OFFSET


@pytest.mark.parametrize("eps", [0.5, 1.0, 2.0])
def test_eigvec_mass_and_mean(eps):
    p = CrossoverParams(epsilon=eps)
    assert abs(eigvec_moment(p, 0) - 1) < 1e-6
    assert abs(eigvec_moment(p, 1) - 1) < 1e-6


def test_eigvec_limits():
    # large epsilon approaches the complex Porter-Thomas law e^{-x}
    p = CrossoverParams(epsilon=200.0)
    for x in (0.3, 1.0, 2.5):
        assert abs(eigvec_component_pdf(p, x) - math.exp(-x)) < 1e-2
    # small epsilon develops the real x^{-1/2} singularity
    small = CrossoverParams(epsilon=0.01)
    assert eigvec_component_pdf(small, 1e-3) > eigvec_component_pdf(small, 1e-1) > 1.0


def test_eigvec_cdf_table_monotone():
    xs, F = eigvec_cdf_table(CrossoverParams(epsilon=1.0), n=200)
    assert np.all(np.diff(F) >= -1e-12)
    assert abs(F[-1] - 1) < 1e-6


def test_eigvec_requires_epsilon():
    with pytest.raises(ValidationError):
        eigvec_component_pdf(CrossoverParams(alpha=0.3), 1.0)
    with pytest.raises(DomainError):
        eigvec_component_pdf(CrossoverParams(epsilon=1.0), 0.0)
