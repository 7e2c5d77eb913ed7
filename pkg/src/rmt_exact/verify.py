"""Oracle suite behind ``rmt-exact verify``.

Each check returns a dict ``{name, group, passed, detail, seconds}``. Groups
follow the acceptance list: exact conductance, half-integer conductance,
real-spectrum probabilities, recursion vs brute force, HS second moment,
Monte Carlo, crossover, and properties.
"""

from __future__ import annotations

import time
from fractions import Fraction
from typing import Callable

import numpy as np

from .exactnum.piecewise import PiecewisePuiseux
from .exactnum.symbolic import SymbolicValue

__all__ = [
    "reference_conductance",
    "REAL_PROB_TABLE",
    "run_suite",
    "forward_laplace_error",
    "variance_z",
    "iter_checks",
    "run_group",
]


def reference_conductance(atilde) -> PiecewisePuiseux:
    """Published closed forms of the ``beta=1, N=3`` conductance PDF.

    ``atilde = 0``::

        3/8 (t^5 - (t-1)^3 (40 - 10(t-1) + (t-1)^2) H(t-1)
                 - (t-2)^3 (40 + 10(t-2) + (t-2)^2) H(t-2))

    ``atilde = -1/2``::

        6/7 t^(7/2) 1(0<t<1) + 3/28 (35t^3 - 175t^2 + 273t - 125
                                     - 8 (t-2)^(5/2) (t+5) H(t-2)) 1(1<t<3)
    """
    a = Fraction(atilde)
    if a == 0:
        q = Fraction(3, 8)
        terms = {
            (0, 0, 10): q,
            (1, 1, 6): -40 * q, (1, 1, 8): 10 * q, (1, 1, 10): -q,
            (2, 2, 6): -40 * q, (2, 2, 8): -10 * q, (2, 2, 10): -q,
        }
    elif a == Fraction(-1, 2):
        q = Fraction(3, 28)
        terms = {
            (0, 0, 7): Fraction(6, 7), (1, 0, 7): Fraction(-6, 7),
            (1, 0, 6): 35 * q, (1, 0, 4): -175 * q, (1, 0, 2): 273 * q, (1, 0, 0): -125 * q,
            # (t-2)^(5/2) (t+5) = (t-2)^(7/2) + 7 (t-2)^(5/2)
            (2, 2, 7): -8 * q, (2, 2, 5): -56 * q,
        }
    else:
        raise KeyError(f"no reference form for atilde={a}")
    return PiecewisePuiseux(terms, support=(0, 3))


# (m, N, L) -> exact value
REAL_PROB_TABLE = {
    (2, 2, ()): SymbolicValue.pi_power(2, Fraction(1, 4)),
    (2, 2, (2, 2)): SymbolicValue.rational(Fraction(20, 27)),
    (2, 2, (4, 4)): SymbolicValue.rational(Fraction(97984, 128625)),
    (2, 2, (4, 6)): SymbolicValue.rational(Fraction(649984, 848925)),
}


def forward_laplace_error(pdf: PiecewisePuiseux, Q, gamma, S, beta, s: float) -> float:
    """Relative gap between ``int e^{-s t} P(t) dt`` and ``s'^-gamma Q(s') / S``.

    ``s' = 2 s / beta`` undoes the scaled Laplace variable.
    """
    from scipy import integrate

    T = float(pdf.support[1])
    bps = sorted(float(b) for b in pdf.breakpoints() if 0 < b < T)
    edges = [0.0] + bps + [T]
    lhs = sum(
        integrate.quad(lambda t: np.exp(-s * t) * pdf.evaluate_array(np.array([t]))[0], lo, hi,
                       epsabs=1e-15, epsrel=1e-13, limit=200)[0]
        for lo, hi in zip(edges[:-1], edges[1:])
    )
    sp = 2 * s / beta
    rhs = float(Q.evaluate(sp)) * sp ** (-float(gamma)) / float(S.evalf(30))
    return abs(lhs - rhs) / abs(rhs)


def variance_z(x: np.ndarray, exact) -> float:
    """z-score of the sample variance with a fourth-moment standard error."""
    n = x.size
    d = x - x.mean()
    var = float(d @ d / (n - 1))
    se = float(np.sqrt(max(np.mean(d**4) - var * var, 0.0) / n))
    return (var - float(SymbolicValue.coerce(exact).evalf(20))) / se


def _timed(name: str, group: int, fn: Callable[[], tuple]) -> dict:
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as e:  # report, do not abort the suite
        ok, detail = False, f"{type(e).__name__}: {e}"
    return {"name": name, "group": group, "passed": bool(ok), "detail": detail,
            "seconds": round(time.perf_counter() - t0, 3)}


def iter_checks(seed: int = 42, samples: int = 100_000, quick: bool = False):
    """Yield ``(name, group, fn)`` for every check; ``fn()`` returns ``(passed, detail)``."""
    from . import crossover as X
    from .fixedtrace import BipartiteDims, density_hs, distance_and_fidelity, entanglement_means, \
        smallest_eig_pdf_hs, var_vn_bh
    from .laplace import LaplacePrefactor, conductance_pdf
    from .meijerg import ProductSpec, prob_all_real
    from .montecarlo import compare_to_exact, statistics as S
    from .recursion import EnsembleParams, q_bruteforce, q_laguerre

    def c1():
        got = conductance_pdf(EnsembleParams(N=3, beta=1, atilde=0))
        return got == reference_conductance(0), str(got)

    def c1b():
        got = conductance_pdf(EnsembleParams.from_channels(3, 3, 1))
        return got == reference_conductance(Fraction(-1, 2)), "n=3 gives atilde=-1/2"

    yield "conductance beta=1 N=3 atilde=0", 1, c1
    yield "conductance beta=1 N=3 n=3", 1, c1b

    def c2():
        got = conductance_pdf(EnsembleParams(N=3, beta=1, atilde=Fraction(-1, 2)))
        has = (2, 2, 5) in got.terms
        return got == reference_conductance(Fraction(-1, 2)) and has, str(got)

    yield "conductance beta=1 N=3 atilde=-1/2", 2, c2

    for (m, N, L), want in REAL_PROB_TABLE.items():
        def c3(m=m, N=N, L=L, want=want):
            got = prob_all_real(ProductSpec(m=m, N=N, L=L))
            return got == want, str(got)
        yield f"real-prob m={m} N={N} L={L}", 3, c3

    Ns = (1, 2) if quick else (1, 2, 3)
    for N in Ns:
        for beta in (1, 2, 4):
            for a in (0, 1, 2):
                def c4(N=N, beta=beta, a=a):
                    p = EnsembleParams(N=N, beta=beta, atilde=a)
                    return q_laguerre(p) == q_bruteforce(p), ""
                yield f"q_laguerre == q_bruteforce N={N} beta={beta} atilde={a}", 4, c4

    for N, n in ((2, 2), (2, 4), (3, 3)):
        def c5(N=N, n=n):
            got = density_hs(BipartiteDims(N=N, n=n)).moment(2)
            want = SymbolicValue.rational(Fraction(n + N, n * N + 1))
            return got == want, str(got)
        yield f"int x^2 rho_HS N={N} n={n}", 5, c5

    # Monte Carlo
    def mean_check(stat, exact, name):
        def f():
            r = compare_to_exact(S.collect(stat, samples, seed), exact, "meanStderr", name)
            return r.passed, f"mean={r.mean:.6g} exact={r.exact_mean:.6g} z={r.z:.2f}"
        return f

    def ks_check(stat, exact, name, n=None):
        def f():
            r = compare_to_exact(S.collect(stat, n or samples, seed), exact, "ks", name)
            return r.passed, f"D={r.ks_statistic:.4g} p={r.ks_pvalue:.3g}"
        return f

    d22, d42 = BipartiteDims(2, 2), BipartiteDims(N=2, n=4)
    yield "MC HS purity N=n=2", 6, mean_check(S.purity("HS", d22), Fraction(4, 5), "purity")
    vn_bh, _ = entanglement_means("BH", d42)
    yield "MC BH mean entropy n=4 N=2", 6, mean_check(S.von_neumann("BH", d42), vn_bh, "vn")

    def bh_var():
        z = variance_z(S.collect(S.von_neumann("BH", d42), samples, seed), var_vn_bh(d42))
        return abs(z) <= 4, f"z={z:.2f}"

    yield "MC BH entropy variance n=4 N=2", 6, bh_var
    _, rf, _ = distance_and_fidelity(d22, d22)
    yield "MC mean root fidelity N=n1=n2=2", 6, mean_check(S.root_fidelity(d22, d22), rf, "rootfid")
    for d in (BipartiteDims(2, 3), BipartiteDims(3, 3)):
        yield f"MC smallest eigenvalue KS N={d.N} n={d.n}", 6, ks_check(
            S.smallest_eigenvalue(d), smallest_eig_pdf_hs(d), "lmin")
    for beta, N, n in ((2, 2, 2), (2, 3, 4), (1, 2, 2), (1, 3, 3), (1, 3, 4)):
        p = EnsembleParams.from_channels(N, n, beta)
        yield f"MC conductance KS beta={beta} N={N} n={n}", 6, ks_check(
            S.conductance(p), conductance_pdf(p), "G")
    for m, N, L in ((2, 2, ()), (2, 2, (2, 2))):
        spec = ProductSpec(m=m, N=N, L=L)
        yield f"MC all-real frequency m={m} N={N} L={L}", 6, mean_check(
            S.all_real(spec), prob_all_real(spec), "real")

    # crossover
    for a in (0.1, 0.5, 0.9):
        def c7n(a=a):
            v = X.ratio_fractional_moment(X.CrossoverParams(alpha=a), 0)
            return abs(v - 1) <= 1e-8, f"mass-1={v - 1:.2e}"
        yield f"ratio PDF normalization alpha={a}", 7, c7n

    def c7d():
        p = X.CrossoverParams(alpha=0.5)
        err = max(abs(X.ratio_pdf(p, r) * r * r - X.ratio_pdf(p, 1 / r)) for r in (1 / 3, 0.5, 2, 3))
        return err <= 1e-10, f"max err {err:.1e}"

    yield "ratio PDF r <-> 1/r duality", 7, c7d
    for a in (0.3, 0.7):
        p = X.CrossoverParams(alpha=a)
        yield f"MC ratio KS alpha={a}", 7, (lambda p=p: ks_check(
            S.crossover_ratio(p), X.ratio_cdf_function(p), "ratio")())
    for e in (0.5, 1.0, 2.0):
        def c7m(e=e):
            p = X.CrossoverParams(epsilon=e)
            m0, m1 = X.eigvec_moment(p, 0), X.eigvec_moment(p, 1)
            return abs(m0 - 1) <= 1e-6 and abs(m1 - 1) <= 1e-6, f"mass-1={m0 - 1:.1e} mean-1={m1 - 1:.1e}"
        yield f"eigenvector PDF mass and mean eps={e}", 7, c7m
    if not quick:
        p = X.CrossoverParams(epsilon=1.0)
        yield "MC eigenvector component KS eps=1", 7, (lambda: ks_check(
            S.eigvec_components(1.0, N=EIGVEC_N), X.eigvec_cdf_table(p), "x", n=EIGVEC_SAMPLES)())

    # forward Laplace consistency of the conductance PDFs
    rng = np.random.default_rng(seed)
    for beta, N, a in ((1, 3, 0), (1, 3, Fraction(-1, 2)), (2, 2, 0), (4, 2, 1)):
        def c8(beta=beta, N=N, a=a):
            p = EnsembleParams(N=N, beta=beta, atilde=a)
            pre = LaplacePrefactor.for_params(p)
            pdf, Q = conductance_pdf(p), q_laguerre(p)
            errs = [forward_laplace_error(pdf, Q, pre.gamma, pre.S, beta, s)
                    for s in rng.uniform(0.2, 5.0, 5)]
            return max(errs) <= 1e-8, f"max rel err {max(errs):.1e}"
        yield f"forward Laplace beta={beta} N={N} atilde={a}", 8, c8


EIGVEC_N = 400
EIGVEC_SAMPLES = 20000


def run_group(group: int, seed: int = 42, samples: int = 100_000, quick: bool = False) -> list:
    """Run the checks of one group and return their result dicts."""
    return [_timed(name, g, fn) for name, g, fn in iter_checks(seed, samples, quick) if g == group]


def run_suite(seed: int = 42, samples: int = 100_000, quick: bool = False, stream=None) -> list:
    """Run every check; optionally print one line per check to ``stream``."""
    out = []
    for name, group, fn in iter_checks(seed, samples, quick):
        r = _timed(name, group, fn)
        out.append(r)
        if stream is not None:
            flag = "PASS" if r["passed"] else "FAIL"
            stream.write(f"[{group}] {flag} {name} ({r['seconds']}s) {r['detail'][:100]}\n")
            stream.flush()
    return out
