"""Closed algebra of exponential-polynomial-erf sums in one variable.

An :class:`ErfExpoSum` is a finite sum of terms

    coef * s**(m/2) * exp(-rho*s) * prod_i erf(sqrt(q_i*s/2))**p_i

with ``coef`` a :class:`SymbolicValue`, ``m`` an integer, ``rho >= 0``
rational and ``(q_i, p_i)`` positive integers. Terms are keyed by
``(m, rho, erf)`` where ``erf`` is a tuple of ``(q, p)`` pairs sorted by
``q``; equal keys merge on construction so equality of canonical forms is
equality of dicts.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import mpmath

from ..errors import NonIntegrable, UnsupportedTerm
from .symbolic import SQRT_PI, ZERO, SymbolicValue

HALF = Fraction(1, 2)


def _merge_erf(e1, e2):
    if not e1:
        return e2
    if not e2:
        return e1
    d = dict(e1)
    for q, p in e2:
        d[q] = d.get(q, 0) + p
    return tuple(sorted(d.items()))


def _acc(out, key, c):
    v = out.get(key)
    out[key] = c if v is None else v + c


def _erf_derivative_factor(q: int) -> SymbolicValue:
    # d/ds erf(sqrt(q s/2)) = sqrt(q/(2 pi)) s^(-1/2) exp(-q s/2)
    return SymbolicValue.pi_power(-1) * SymbolicValue.sqrt_rational(Fraction(q, 2))


def _erf_prime_terms(m, rho, erf):
    """Terms of ``s^(m/2) e^(-rho s) * d/ds[prod erf^p]`` as (key, coef)."""
    out = []
    for i, (q, p) in enumerate(erf):
        rest = list(erf)
        if p == 1:
            del rest[i]
        else:
            rest[i] = (q, p - 1)
        out.append(((m - 1, rho + Fraction(q, 2), tuple(rest)), _erf_derivative_factor(q) * p))
    return out


class ErfExpoSum:
    """Immutable canonical sum of erf-exponential-Puiseux terms."""

    __slots__ = ("_terms", "var")

    def __init__(self, terms=None, var: str = "s"):
        clean = {}
        if terms:
            for (m, rho, erf), c in terms.items():
                c = SymbolicValue.coerce(c)
                if c:
                    rho = Fraction(rho)
                    if rho < 0:
                        raise ValueError("negative exponential rates are not supported")
                    erf = tuple(sorted((int(q), int(p)) for q, p in erf if p))
                    key = (int(m), rho, erf)
                    if key in clean:
                        c = clean[key] + c
                        if not c:
                            del clean[key]
                            continue
                    clean[key] = c
        self._terms = clean
        self.var = var

    @classmethod
    def _raw(cls, terms, var="s"):
        obj = cls.__new__(cls)
        obj._terms = {k: c for k, c in terms.items() if c}
        obj.var = var
        return obj

    # -- constructors -------------------------------------------------
    @classmethod
    def constant(cls, c=1):
        return cls({(0, Fraction(0), ()): c})

    @classmethod
    def term(cls, coef=1, m: int = 0, rho=0, erf=()):
        return cls({(m, Fraction(rho), tuple(erf)): coef})

    @classmethod
    def zero(cls):
        return cls._raw({})

    # -- inspection ---------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_exp_poly(self) -> bool:
        """True when every term is ``s^k e^(-rho s)`` with integer ``k``."""
        return all(m % 2 == 0 and not erf for (m, _, erf) in self._terms)

    def rates(self) -> set:
        return {rho for (_, rho, _) in self._terms}

    def erf_signatures(self) -> set:
        return {erf for (_, _, erf) in self._terms}

    def max_erf_degree(self) -> int:
        return max((sum(p for _, p in erf) for (_, _, erf) in self._terms), default=0)

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, ErfExpoSum):
            other = ErfExpoSum.constant(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            _acc(out, k, c)
        return ErfExpoSum._raw(out, self.var)

    __radd__ = __add__

    def __neg__(self):
        return ErfExpoSum._raw({k: -c for k, c in self._terms.items()}, self.var)

    def __sub__(self, other):
        if not isinstance(other, ErfExpoSum):
            other = ErfExpoSum.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, ErfExpoSum):
            out = {}
            for (m1, r1, e1), c1 in self._terms.items():
                for (m2, r2, e2), c2 in other._terms.items():
                    _acc(out, (m1 + m2, r1 + r2, _merge_erf(e1, e2)), c1 * c2)
            return ErfExpoSum._raw(out, self.var)
        try:
            c = SymbolicValue.coerce(other)
        except TypeError:
            return NotImplemented
        if not c:
            return ErfExpoSum._raw({}, self.var)
        return ErfExpoSum._raw({k: v * c for k, v in self._terms.items()}, self.var)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, SymbolicValue):
            return self * other.inverse()
        return self * (1 / Fraction(other))

    def shift_power(self, half_steps: int) -> "ErfExpoSum":
        """Multiply by ``s^(half_steps/2)``."""
        return ErfExpoSum._raw(
            {(m + half_steps, rho, erf): c for (m, rho, erf), c in self._terms.items()}, self.var
        )

    def __eq__(self, other):
        if isinstance(other, ErfExpoSum):
            return self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    # -- calculus -----------------------------------------------------
    def differentiate(self) -> "ErfExpoSum":
        out = {}
        for (m, rho, erf), c in self._terms.items():
            if m:
                _acc(out, (m - 2, rho, erf), c * Fraction(m, 2))
            if rho:
                _acc(out, (m, rho, erf), c * (-rho))
            for key, f in _erf_prime_terms(m, rho, erf):
                _acc(out, key, c * f)
        return ErfExpoSum._raw(out, self.var)

    def value_at_zero(self) -> SymbolicValue:
        """Limit ``s -> 0+``; raises if a term diverges there."""
        total = ZERO
        for (m, rho, erf), c in self._terms.items():
            order = m + sum(p for _, p in erf)
            if order > 0:
                continue
            if order < 0:
                raise NonIntegrable(f"term s^({m}/2)*erf^... diverges at 0")
            v = c
            for q, p in erf:
                # erf(sqrt(q s/2)) ~ sqrt(2q/pi) s^(1/2)
                v = v * (SymbolicValue.pi_power(-1) * SymbolicValue.sqrt_rational(2 * q)) ** p
            total = total + v
        return total

    def antiderive_on_interval(self) -> "ErfExpoSum":
        """``F(s) = integral_0^s f(x) dx`` within the algebra.

        Raises :class:`NonIntegrable` for a term with ``m < -1`` and
        :class:`UnsupportedTerm` when reductions leave integrals of the form
        ``int x^(-1/2) e^(-rho x) prod erf`` that do not cancel across terms.
        """
        out = {}
        residual = {}
        for (m, rho, erf), c in self._terms.items():
            if m < -1:
                raise NonIntegrable(f"s^({m}/2) is not integrable at 0")
            elem, res = _indefinite(m, rho, erf)
            for k, v in elem.items():
                _acc(out, k, v * c)
            for k, v in res.items():
                _acc(residual, k, v * c)
        left = {k: v for k, v in residual.items() if v}
        if left:
            raise UnsupportedTerm(
                "non-elementary erf integrals remain: "
                + ", ".join(f"int x^(-1/2) e^(-{r} x) {_erf_str(e)}" for (r, e) in left)
            )
        F = ErfExpoSum._raw(out, self.var)
        c0 = F.value_at_zero()
        return F - ErfExpoSum.constant(c0) if c0 else F

    # -- numerics -----------------------------------------------------
    def evaluate(self, s, dps: int = 30):
        """Numerical value at ``s > 0`` as an mpmath number."""
        with mpmath.workdps(dps + 10):
            s = mpmath.mpf(s)
            total = mpmath.mpf(0)
            for (m, rho, erf), c in self._terms.items():
                v = c.evalf(dps + 10) * s ** (mpmath.mpf(m) / 2)
                if rho:
                    v *= mpmath.exp(-mpmath.mpf(rho.numerator) / rho.denominator * s)
                for q, p in erf:
                    v *= mpmath.erf(mpmath.sqrt(q * s / 2)) ** p
                total += v
            return +total

    # -- display ------------------------------------------------------
    def __repr__(self):
        return f"ErfExpoSum({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for key in sorted(self._terms, key=lambda k: (k[1], k[2], k[0])):
            m, rho, erf = key
            c = self._terms[key]
            fs = []
            if m:
                fs.append(f"{self.var}^({m}/2)" if m % 2 else
                          (self.var if m == 2 else f"{self.var}^{m // 2}"))
            if rho:
                fs.append(f"exp(-{rho}*{self.var})")
            if erf:
                fs.append(_erf_str(erf, self.var))
            cs = str(c)
            cs = cs if len(c.terms) == 1 and "+" not in cs else f"({cs})"
            parts.append("*".join([cs] + fs))
        return " + ".join(parts)


def _erf_str(erf, var="x"):
    return "*".join(
        f"erf(sqrt({q}*{var}/2))" + (f"^{p}" if p > 1 else "") for q, p in erf
    )


@lru_cache(maxsize=None)
def _indefinite(m: int, rho: Fraction, erf: tuple):
    """Antiderivative of ``x^(m/2) e^(-rho x) prod erf`` (unit coefficient).

    Returns ``(elementary, residual)`` dicts. ``residual`` maps
    ``(rho, erf)`` to the coefficient of the irreducible integral
    ``int x^(-1/2) e^(-rho x) erf-product dx``.
    """
    if m < -1:
        raise NonIntegrable(f"x^({m}/2) is not integrable at 0")
    elem, res = {}, {}

    def add(src, factor):
        e, r = src
        for k, v in e.items():
            _acc(elem, k, v * factor)
        for k, v in r.items():
            _acc(res, k, v * factor)

    if not erf:
        if rho == 0:
            k = m + 2
            elem[(k, Fraction(0), ())] = SymbolicValue.rational(Fraction(2, k))
        elif m == -1:
            q = 2 * rho
            if q.denominator != 1:
                raise UnsupportedTerm(f"erf(sqrt({rho} x)) is outside the erf(sqrt(q x/2)) family")
            elem[(0, Fraction(0), ((int(q), 1),))] = SQRT_PI * SymbolicValue.sqrt_rational(1 / rho)
        else:
            elem[(m, rho, ())] = SymbolicValue.rational(-1 / rho)
            if m >= 1:
                add(_indefinite(m - 2, rho, ()), SymbolicValue.rational(Fraction(m, 2) / rho))
        return _freeze(elem, res)

    if rho == 0:
        k = m + 2
        w = Fraction(2, k)
        elem[(k, Fraction(0), erf)] = SymbolicValue.rational(w)
        for key, f in _erf_prime_terms(k, Fraction(0), erf):
            add(_indefinite(*key), f * (-w))
        return _freeze(elem, res)

    if m == -1:
        if len(erf) == 1 and erf[0][0] == 2 * rho:
            q, p = erf[0]
            elem[(0, Fraction(0), ((q, p + 1),))] = (
                SQRT_PI * SymbolicValue.sqrt_rational(Fraction(2, q)) * Fraction(1, p + 1)
            )
        else:
            res[(rho, erf)] = SymbolicValue.rational(1)
        return _freeze(elem, res)

    inv = 1 / rho
    elem[(m, rho, erf)] = SymbolicValue.rational(-inv)
    if m >= 1:
        add(_indefinite(m - 2, rho, erf), SymbolicValue.rational(Fraction(m, 2) * inv))
    for key, f in _erf_prime_terms(m, rho, erf):
        add(_indefinite(*key), f * inv)
    return _freeze(elem, res)


def _freeze(elem, res):
    return ({k: v for k, v in elem.items() if v}, {k: v for k, v in res.items() if v})


def differentiate(f: ErfExpoSum) -> ErfExpoSum:
    return f.differentiate()


def antiderive_on_interval(f: ErfExpoSum) -> ErfExpoSum:
    return f.antiderive_on_interval()
