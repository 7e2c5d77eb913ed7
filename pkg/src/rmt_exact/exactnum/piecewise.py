"""Piecewise Puiseux functions of one variable.

A :class:`PiecewisePuiseux` is a sum of terms

    coef * (t - anchor)**(m/2) * Theta(t - start),     anchor <= start,

on a declared support ``[0, T]``. ``Theta`` is right-continuous
(``Theta(0) = 1``) except for the singular ``m = -1`` terms. Integer-power terms are always stored with
``anchor == start`` (re-expanded binomially), so two representations of the
same function have identical canonical dicts. Half-integer terms keep their
anchor because ``(t - a)^(k+1/2)`` has no finite expansion about another
point; this is what lets a density switch from ``t^(7/2)`` to a polynomial
at ``t = 1``.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

import mpmath
import numpy as np

from ..errors import NonIntegrable
from .symbolic import ZERO, SymbolicValue


def _acc(out, key, c):
    v = out.get(key)
    out[key] = c if v is None else v + c


def _power(base: Fraction, half_exp: int) -> SymbolicValue:
    """``base**(half_exp/2)`` exactly for ``base >= 0``."""
    if base == 0:
        if half_exp > 0:
            return ZERO
        if half_exp == 0:
            return SymbolicValue.rational(1)
        raise ZeroDivisionError("0 to a negative power")
    return SymbolicValue.rational_power(base, Fraction(half_exp, 2))


def _mpf(q: Fraction):
    return mpmath.mpf(q.numerator) / q.denominator


class PiecewisePuiseux:
    __slots__ = ("_terms", "support", "var")

    def __init__(self, terms=None, support=(0, 1), var: str = "t"):
        out = {}
        if terms:
            for key, c in terms.items():
                if len(key) == 2:
                    start, m = key
                    anchor = start
                else:
                    start, anchor, m = key
                self._add_term(out, Fraction(start), Fraction(anchor), int(m),
                               SymbolicValue.coerce(c))
        self._terms = {k: v for k, v in out.items() if v}
        self.support = (Fraction(support[0]), Fraction(support[1]))
        self.var = var

    @staticmethod
    def _add_term(out, start, anchor, m, c):
        if not c:
            return
        if m < -1:
            raise NonIntegrable(f"(t-{anchor})^({m}/2) is not integrable")
        if anchor > start:
            raise ValueError("anchor must not exceed the start of a term")
        if m % 2 == 0 and anchor != start:
            k = m // 2
            h = start - anchor
            for i in range(k + 1):
                _acc(out, (start, start, 2 * i), c * (comb(k, i) * h ** (k - i)))
            return
        _acc(out, (start, anchor, m), c)

    @classmethod
    def _raw(cls, terms, support, var="t"):
        obj = cls.__new__(cls)
        obj._terms = {k: v for k, v in terms.items() if v}
        obj.support = support
        obj.var = var
        return obj

    # -- inspection ---------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def breakpoints(self) -> set:
        return {start for (start, _, _) in self._terms}

    def is_zero(self):
        return not self._terms

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, PiecewisePuiseux):
            return NotImplemented
        out = dict(self._terms)
        for k, c in other._terms.items():
            _acc(out, k, c)
        support = (min(self.support[0], other.support[0]), max(self.support[1], other.support[1]))
        return PiecewisePuiseux._raw(out, support, self.var)

    def __neg__(self):
        return PiecewisePuiseux._raw({k: -c for k, c in self._terms.items()}, self.support, self.var)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        c = SymbolicValue.coerce(other)
        return PiecewisePuiseux._raw({k: v * c for k, v in self._terms.items()}, self.support, self.var)

    __rmul__ = __mul__

    def restricted_terms(self) -> dict:
        """Terms that start inside the support; these fix the function on it."""
        T = self.support[1]
        return {k: c for k, c in self._terms.items() if k[0] < T}

    def restricted(self) -> "PiecewisePuiseux":
        """Same function on the support without the terms that start at or past its end."""
        return PiecewisePuiseux._raw(self.restricted_terms(), self.support, self.var)

    def __eq__(self, other):
        """Equality as functions on the (common) declared support."""
        if not isinstance(other, PiecewisePuiseux):
            return NotImplemented
        return self.support == other.support and self.restricted_terms() == other.restricted_terms()

    def __hash__(self):
        return hash((self.support, frozenset(self.restricted_terms().items())))

    def with_support(self, support) -> "PiecewisePuiseux":
        return PiecewisePuiseux._raw(dict(self._terms), (Fraction(support[0]), Fraction(support[1])), self.var)

    def rescale(self, k) -> "PiecewisePuiseux":
        """Return ``t -> f(k t)`` for rational ``k > 0``."""
        k = Fraction(k)
        out = {}
        for (start, anchor, m), c in self._terms.items():
            # (k t - a)^(m/2) = k^(m/2) (t - a/k)^(m/2)
            _acc(out, (start / k, anchor / k, m), c * _power(k, m))
        support = (self.support[0] / k, self.support[1] / k)
        return PiecewisePuiseux._raw(out, support, self.var)

    # -- calculus -----------------------------------------------------
    def antiderivative(self) -> "PiecewisePuiseux":
        """``F(t) = integral_{-inf}^t f``; same support, exact."""
        out = {}
        for (start, anchor, m), c in self._terms.items():
            e = Fraction(m + 2, 2)
            self._add_term(out, start, anchor, m + 2, c / e)
            const = c * _power(start - anchor, m + 2) / e
            if const:
                self._add_term(out, start, start, 0, -const)
        return PiecewisePuiseux._raw({k: v for k, v in out.items() if v}, self.support, self.var)

    def moment(self, k: int) -> SymbolicValue:
        """Exact ``integral_0^T t^k f(t) dt`` over the declared support."""
        T = self.support[1]
        lo = self.support[0]
        total = ZERO
        for (start, anchor, m), c in self._terms.items():
            b = max(start, lo)
            if b >= T:
                continue
            # t^k = sum_i C(k,i) a^(k-i) (t-a)^i
            for i in range(k + 1):
                w = comb(k, i) * anchor ** (k - i)
                if not w:
                    continue
                e2 = 2 * i + m + 2  # twice the exponent after integration
                val = (_power(T - anchor, e2) - _power(b - anchor, e2)) * Fraction(2, e2)
                total = total + c * val * w
        return total

    def tail_vanishes(self, T=None) -> bool:
        """True when the terms sum to the zero function on ``(T, inf)``."""
        T = self.support[1] if T is None else Fraction(T)
        acc = {}
        for (start, anchor, m), c in self._terms.items():
            if start > T:
                return False
            self._add_term(acc, T, anchor if m % 2 else start, m, c)
        return all(not v for v in acc.values())

    # -- numerics -----------------------------------------------------
    def evaluate(self, t, dps: int = 30):
        with mpmath.workdps(dps + 10):
            t = _mpf(t) if isinstance(t, Fraction) else mpmath.mpf(t)
            total = mpmath.mpf(0)
            if t < _mpf(self.support[0]) or t > _mpf(self.support[1]):
                return total
            for (start, anchor, m), c in self._terms.items():
                s0 = _mpf(start)
                if t < s0 or (t == s0 and m < 0):
                    continue
                a = _mpf(anchor)
                total += c.evalf(dps + 10) * (t - a) ** (mpmath.mpf(m) / 2)
            return +total

    def float_terms(self):
        return [(float(start), float(anchor), m, float(c)) for (start, anchor, m), c in self._terms.items()]

    def evaluate_array(self, t) -> np.ndarray:
        """Vectorized float64 evaluation."""
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for start, anchor, m, c in self.float_terms():
            mask = t > start if m < 0 else t >= start
            if m == 0:
                out += np.where(mask, c, 0.0)
            else:
                d = np.where(mask, t - anchor, 1.0)
                out += np.where(mask, c * d ** (m / 2), 0.0)
        lo, hi = float(self.support[0]), float(self.support[1])
        return np.where((t < lo) | (t > hi), 0.0, out)

    # -- display ------------------------------------------------------
    def __repr__(self):
        return f"PiecewisePuiseux({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        v = self.var
        parts = []
        for key in sorted(self._terms):
            start, anchor, m = key
            c = self._terms[key]
            cs = str(c)
            cs = cs if len(c.terms) == 1 and "+" not in cs else f"({cs})"
            base = v if anchor == 0 else f"({v}-{anchor})"
            if m == 0:
                body = cs
            elif m == 2:
                body = f"{cs}*{base}"
            elif m % 2 == 0:
                body = f"{cs}*{base}^{m // 2}"
            else:
                body = f"{cs}*{base}^({m}/2)"
            parts.append(f"{body}*H({v}-{start})")
        return " + ".join(parts)


def piecewise_moment(f: PiecewisePuiseux, k: int) -> SymbolicValue:
    return f.moment(k)
