"""Command-line front end: ``rmt-exact <subcommand> [options]``.

Results are JSON objects ``{task, params, exact, decimal, mc}`` or CSV curves.
Errors go to stderr as ``ERROR:<code>:<message>``; the exit status is 1 for
invalid input and 2 for a failed internal assertion.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from .errors import RMTError
from .exactnum.piecewise import PiecewisePuiseux
from .exactnum.symbolic import SymbolicValue

__all__ = ["main", "build_parser", "exact_map", "pdf_map", "run"]


# -- serialization ----------------------------------------------------------------

def _frac(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def _monomial(key, coef) -> dict:
    k, d, l, g = key
    out = {"pi_half_power": k, "rational": _frac(coef)}
    if d != 1:
        out["sqrt"] = d
    if l:
        out["ln2"] = l
    if g:
        out["euler_gamma"] = g
    return out


def exact_map(v) -> dict:
    """Basis-coefficient map of an exact value.

    A single monomial is flat, e.g. ``{"pi_half_power": 2, "rational": "1/4"}``
    for ``pi/4``; sums become ``{"terms": [...]}``.
    """
    v = SymbolicValue.coerce(v)
    items = sorted(v.items())
    if not items:
        return {"pi_half_power": 0, "rational": "0/1"}
    if len(items) == 1:
        return _monomial(*items[0])
    return {"terms": [_monomial(k, c) for k, c in items]}


def pdf_map(f: PiecewisePuiseux) -> dict:
    """Term list ``coef * (t - anchor)^(half_power/2) * Theta(t - start)``."""
    f = f.restricted()
    terms = []
    for (start, anchor, m), c in sorted(f.items()):
        terms.append({"start": _frac(start), "anchor": _frac(anchor), "half_power": m,
                      "coef": exact_map(c)})
    return {"support": [_frac(f.support[0]), _frac(f.support[1])], "variable": f.var,
            "symbolic": str(f), "terms": terms}


def _json_scalar(v):
    # numpy scalars that slipped through
    if isinstance(v, np.generic):
        return v.item()
    raise TypeError(f"Object of type {type(v).__name__} is not JSON serializable")


def _mc(report) -> dict | None:
    if report is None:
        return None
    d = report.to_dict()
    return {k: d[k] for k in ("mean", "stderr", "n", "ks", "ks_pvalue", "z", "passed")}


def _result(task, params, exact, decimal, mc=None, **extra) -> dict:
    out = {"task": task, "params": params, "exact": exact, "decimal": decimal, "mc": _mc(mc)}
    out.update(extra)
    return out


def curve_rows(evaluate, lo: float, hi: float, breakpoints=(), per_unit: int = 512):
    """Grid of ``per_unit`` points per unit interval plus every breakpoint."""
    n = max(int(np.ceil((hi - lo) * per_unit)), 1)
    grid = {float(x): 0 for x in np.linspace(lo, hi, n + 1)}
    for b in breakpoints:
        if lo <= float(b) <= hi:
            grid[float(b)] = 1
    xs = np.array(sorted(grid))
    ys = evaluate(xs)
    return [(x, y, grid[x]) for x, y in zip(xs, ys)]


def _write_csv(rows, header_lines, columns, out):
    for line in header_lines:
        out.write(f"# {line}\n")
    out.write(",".join(columns) + "\n")
    for x, y, flag in rows:
        out.write(f"{x:.17g},{y:.17g},{flag}\n")


# -- helpers -------------------------------------------------------------------------

def _parse_L(text):
    if text is None or text == "":
        return ()
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"--L expects comma-separated integers, got {text!r}")


def _dec(v, precision):
    return SymbolicValue.coerce(v).to_decimal(precision)


def _fmt_float(x, precision):
    return f"{x:.{min(precision, 17)}g}"


def _samples(args):
    return 0 if args.no_mc else args.samples


# -- subcommands ---------------------------------------------------------------------

def cmd_conductance(args):
    from .laplace import conductance_pdf
    from .recursion import EnsembleParams

    if args.atilde is not None:
        params = EnsembleParams(N=args.N, beta=args.beta, atilde=Fraction(args.atilde), n=args.n)
    elif args.n is not None:
        params = EnsembleParams.from_channels(args.N, args.n, args.beta)
    else:
        raise _usage("conductance needs --n or --atilde")
    pdf = conductance_pdf(params)
    mean = pdf.moment(1)
    report = None
    n = _samples(args)
    if n and params.beta in (1, 2) and params.n is not None:
        from .montecarlo import compare_to_exact, statistics as S
        report = compare_to_exact(S.collect(S.conductance(params), n, args.seed), pdf, "ks",
                                  "conductance")
    p = {"N": params.N, "n": params.n, "beta": params.beta, "atilde": _frac(params.atilde)}
    return _result("conductance", p, pdf_map(pdf), _dec(mean, args.precision), report,
                   exact_mean=exact_map(mean)), pdf


def cmd_smallest_eig(args):
    from .fixedtrace import BipartiteDims, smallest_eig_pdf_hs

    dims = BipartiteDims(N=args.N, n=args.n)
    pdf = smallest_eig_pdf_hs(dims)
    mean = pdf.moment(1)
    report = None
    if _samples(args):
        from .montecarlo import compare_to_exact, statistics as S
        report = compare_to_exact(S.collect(S.smallest_eigenvalue(dims), _samples(args), args.seed),
                                  pdf, "ks", "smallest_eigenvalue")
    return _result("smallest-eig", {"N": dims.N, "n": dims.n}, pdf_map(pdf),
                   _dec(mean, args.precision), report, exact_mean=exact_map(mean)), pdf


def cmd_hs_density(args):
    from .fixedtrace import BipartiteDims, density_hs

    dims = BipartiteDims(N=args.N, n=args.n)
    rho = density_hs(dims)
    second = rho.moment(2)
    report = None
    if _samples(args):
        from .montecarlo import compare_to_exact, eigvalsh_batch, sample_batch, statistics as S

        def stat(rng, size):
            per = -(-size // dims.N)
            lam = eigvalsh_batch(sample_batch("fixedTraceHS", dims, rng, per))
            return lam.ravel()[:size]

        report = compare_to_exact(S.collect(stat, _samples(args), args.seed), rho * Fraction(1, dims.N),
                                  "ks", "eigenvalue")
    return _result("hs-density", {"N": dims.N, "n": dims.n}, pdf_map(rho),
                   _dec(second, args.precision), report, second_moment=exact_map(second)), rho


def cmd_entanglement(args):
    from .fixedtrace import BipartiteDims, entanglement_means, var_vn_bh

    dims = BipartiteDims(N=args.N, n=args.n)
    vn, pur = entanglement_means(args.measure, dims)
    exact = {"von_neumann_mean": vn, "purity_mean": pur}
    if args.measure == "BH":
        exact["von_neumann_variance"] = var_vn_bh(dims)
    mc = None
    n = _samples(args)
    if n:
        from .montecarlo import compare_to_exact, statistics as S
        x = S.collect(S.von_neumann(args.measure, dims), n, args.seed)
        y = S.collect(S.purity(args.measure, dims), n, args.seed)
        mc = {"von_neumann_mean": _mc(compare_to_exact(x, vn, "meanStderr", "von_neumann")),
              "purity_mean": _mc(compare_to_exact(y, pur, "meanStderr", "purity"))}
        if args.measure == "BH":
            mc["von_neumann_variance"] = _variance_check(x, exact["von_neumann_variance"])
    out = _result("entanglement", {"N": dims.N, "n": dims.n, "measure": args.measure},
                  {k: exact_map(v) for k, v in exact.items()},
                  {k: _dec(v, args.precision) for k, v in exact.items()})
    out["mc"] = mc
    return out, None


def _variance_check(x, exact) -> dict:
    """Sample variance against an exact variance with a delta-method stderr."""
    n = x.size
    d = x - x.mean()
    var = float(d @ d / (n - 1))
    se = float(np.sqrt(max(np.mean(d**4) - var * var, 0.0) / n))
    ex = float(SymbolicValue.coerce(exact).evalf(20))
    z = (var - ex) / se
    return {"mean": var, "stderr": se, "n": n, "ks": None, "z": z, "passed": bool(abs(z) <= 4)}


def cmd_fidelity(args):
    from .fixedtrace import BipartiteDims, distance_and_fidelity

    d1, d2 = BipartiteDims(N=args.N, n=args.n1), BipartiteDims(N=args.N, n=args.n2)
    dist, rf, fid = distance_and_fidelity(d1, d2)
    exact = {"distance_mean": dist, "root_fidelity_mean": rf, "fidelity_mean": fid}
    mc = None
    n = _samples(args)
    if n:
        from .montecarlo import compare_to_exact, statistics as S
        mc = {
            "distance_mean": _mc(compare_to_exact(S.collect(S.hs_distance(d1, d2), n, args.seed),
                                                  dist, "meanStderr", "distance")),
            "root_fidelity_mean": _mc(compare_to_exact(S.collect(S.root_fidelity(d1, d2), n, args.seed),
                                                       rf, "meanStderr", "root_fidelity")),
            "fidelity_mean": _mc(compare_to_exact(S.collect(S.fidelity(d1, d2), n, args.seed),
                                                  fid, "meanStderr", "fidelity")),
        }
    out = _result("fidelity", {"N": args.N, "n1": args.n1, "n2": args.n2},
                  {k: exact_map(v) for k, v in exact.items()},
                  {k: _dec(v, args.precision) for k, v in exact.items()})
    out["mc"] = mc
    return out, None


def cmd_real_prob(args):
    from .meijerg import ProductSpec, prob_all_real

    spec = ProductSpec(m=args.m, N=args.N, L=args.L)
    v = prob_all_real(spec)
    report = None
    if _samples(args):
        from .montecarlo import compare_to_exact, statistics as S
        report = compare_to_exact(S.collect(S.all_real(spec), _samples(args), args.seed), v,
                                  "meanStderr", "all_real")
    p = {"m": spec.m, "N": spec.N, "L": list(spec.L)}
    return _result("real-prob", p, exact_map(v), _dec(v, args.precision), report), None


def cmd_crossover_ratio(args):
    from .crossover import CrossoverParams, ratio_cdf_function, ratio_fractional_moment, ratio_pdf

    params = CrossoverParams(alpha=args.alpha)
    m = ratio_fractional_moment(params, args.q)
    report = None
    if _samples(args):
        from .montecarlo import compare_to_exact, statistics as S
        report = compare_to_exact(S.collect(S.crossover_ratio(params), _samples(args), args.seed),
                                  ratio_cdf_function(params), "ks", "ratio")
    evaluate = np.vectorize(lambda r: ratio_pdf(params, r) if r > 0 else 0.0, otypes=[float])
    out = _result("crossover-ratio", {"alpha": args.alpha, "q": args.q}, None,
                  _fmt_float(m, args.precision), report)
    return out, (evaluate, 0.0, args.rmax, ())


def cmd_eigvec_pdf(args):
    from .crossover import CrossoverParams, eigvec_cdf_table, eigvec_component_pdf, eigvec_moment

    params = CrossoverParams(epsilon=args.epsilon)
    mass, mean = eigvec_moment(params, 0), eigvec_moment(params, 1)
    report = None
    n = min(_samples(args), 20000)
    if n:
        from .montecarlo import compare_to_exact, statistics as S
        x = S.collect(S.eigvec_components(args.epsilon, N=args.N), max(n, 1000), args.seed)
        report = compare_to_exact(x, eigvec_cdf_table(params), "ks", "eigvec_component")
    evaluate = np.vectorize(lambda x: eigvec_component_pdf(params, x) if x > 0 else 0.0, otypes=[float])
    out = _result("eigvec-pdf", {"epsilon": args.epsilon, "N": args.N}, None,
                  _fmt_float(mean, args.precision), report, mass=_fmt_float(mass, args.precision))
    return out, (evaluate, 0.0, args.xmax, ())


def cmd_verify(args):
    from .verify import run_suite

    results = run_suite(seed=args.seed, samples=args.samples, quick=args.quick, stream=sys.stderr)
    failed = [r for r in results if not r["passed"]]
    out = {"task": "verify", "params": {"seed": args.seed, "samples": args.samples, "quick": args.quick},
           "exact": None, "decimal": None, "mc": None, "checks": results,
           "passed": not failed}
    return out, None


COMMANDS = {
    "conductance": cmd_conductance,
    "smallest-eig": cmd_smallest_eig,
    "hs-density": cmd_hs_density,
    "entanglement": cmd_entanglement,
    "fidelity": cmd_fidelity,
    "real-prob": cmd_real_prob,
    "crossover-ratio": cmd_crossover_ratio,
    "eigvec-pdf": cmd_eigvec_pdf,
    "verify": cmd_verify,
}


# -- argument parsing -------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        sys.stderr.write(f"ERROR:Validation:{message}\n")
        sys.exit(1)


class _UsageError(Exception):
    pass


def _usage(msg):
    return _UsageError(msg)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--samples", type=int, default=100_000, help="Monte Carlo samples (default 1e5)")
    common.add_argument("--no-mc", action="store_true", help="skip the Monte Carlo comparison")
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--precision", type=int, default=30, help="decimal digits")
    common.add_argument("--output", "-o", default=None, help="output file (default stdout)")

    p = _Parser(prog="rmt-exact", description="Exact random-matrix statistics with Monte Carlo checks.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("conductance", parents=[common], help="conductance PDF Tr t^dagger t")
    s.add_argument("--beta", type=int, required=True)
    s.add_argument("--N", type=int, required=True)
    s.add_argument("--n", type=int, default=None, help="channels on the other lead")
    s.add_argument("--atilde", type=str, default=None, help="weight exponent, e.g. 0 or -1/2")

    for name, hlp in (("smallest-eig", "smallest eigenvalue PDF (HS)"),
                      ("hs-density", "eigenvalue density (HS)")):
        s = sub.add_parser(name, parents=[common], help=hlp)
        s.add_argument("--N", type=int, required=True)
        s.add_argument("--n", type=int, required=True)

    s = sub.add_parser("entanglement", parents=[common], help="entropy and purity moments")
    s.add_argument("--N", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--measure", choices=("HS", "BH"), default="HS")

    s = sub.add_parser("fidelity", parents=[common], help="distance and fidelity means (HS)")
    s.add_argument("--N", type=int, required=True)
    s.add_argument("--n1", type=int, required=True)
    s.add_argument("--n2", type=int, required=True)

    s = sub.add_parser("real-prob", parents=[common], help="probability of an all-real spectrum")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--N", type=int, required=True)
    s.add_argument("--L", type=_parse_L, default=(), help="truncation sizes, e.g. 2,2")

    s = sub.add_parser("crossover-ratio", parents=[common], help="N=3 spacing-ratio PDF")
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--q", type=float, default=1.0, help="fractional moment order")
    s.add_argument("--rmax", type=float, default=10.0, help="CSV range")

    s = sub.add_parser("eigvec-pdf", parents=[common], help="eigenvector component PDF")
    s.add_argument("--epsilon", type=float, required=True)
    s.add_argument("--N", type=int, default=400, help="matrix size for sampling")
    s.add_argument("--xmax", type=float, default=10.0, help="CSV range")

    s = sub.add_parser("verify", parents=[common], help="run the oracle suite")
    s.add_argument("--quick", action="store_true", help="skip the slowest checks")
    return p


def _emit(args, result, curve, out):
    if args.format == "json":
        out.write(json.dumps(result, indent=2, sort_keys=False, default=_json_scalar) + "\n")
        return
    if curve is None:
        raise _usage(f"{args.command} has no CSV curve; use --format json")
    if isinstance(curve, PiecewisePuiseux):
        curve = curve.restricted()
        lo, hi = float(curve.support[0]), float(curve.support[1])
        rows = curve_rows(curve.evaluate_array, lo, hi, sorted(curve.breakpoints()))
        header = [f"{result['task']} {json.dumps(result['params'])}",
                  f"P({curve.var}) = {curve}", f"support [{curve.support[0]}, {curve.support[1]}]"]
        cols = (curve.var, "P", "breakpoint")
    else:
        evaluate, lo, hi, bps = curve
        rows = curve_rows(evaluate, lo, hi, bps, per_unit=64)
        header = [f"{result['task']} {json.dumps(result['params'])}"]
        cols = ("x", "P", "breakpoint")
    _write_csv(rows, header, cols, out)


def run(argv=None) -> int:
    """Parse ``argv``, run one subcommand and return the exit status."""
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:  # usage errors, --help and --version
        return e.code if isinstance(e.code, int) else 1
    try:
        result, curve = COMMANDS[args.command](args)
        if args.output:
            with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
                _emit(args, result, curve, fh)
        else:
            _emit(args, result, curve, sys.stdout)
    except _UsageError as e:
        sys.stderr.write(f"ERROR:Validation:{e}\n")
        return 1
    except RMTError as e:
        sys.stderr.write(f"ERROR:{e.code}:{e}\n")
        return 2 if e.internal else 1
    except (ValueError, ZeroDivisionError) as e:
        sys.stderr.write(f"ERROR:Validation:{e}\n")
        return 1
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 0
    except Exception as e:  # pragma: no cover
        sys.stderr.write(f"ERROR:Internal:{type(e).__name__}: {e}\n")
        return 2
    if args.command == "verify":
        return 0 if result["passed"] else 1
    return 0


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":  # pragma: no cover
    main()
