"""Exact numbers over a fixed basis of transcendental constants.

A :class:`SymbolicValue` is a finite linear combination, with rational
coefficients, of basis monomials

    pi**(k/2) * sqrt(d) * ln(2)**l * euler_gamma**g

with ``|k| <= MAX_PI_HALF``, ``d`` a square-free positive integer and
``l, g`` in ``{0, 1}`` (never both 1). Square roots of square-free integers
are part of the basis because erf integrals with rate ``rho`` produce
``sqrt(pi / rho)`` and the Laguerre rescaling produces ``sqrt(2)``.
"""

from __future__ import annotations

import math
from decimal import ROUND_HALF_EVEN, Context, Decimal
from fractions import Fraction
from numbers import Rational

import mpmath

from ..errors import BasisError, NotInvertible

MAX_PI_HALF = 16

ONE_KEY = (0, 1, 0, 0)


def squarefree_split(n: int) -> tuple[int, int]:
    """Return ``(s, d)`` with ``n == s*s*d`` and ``d`` square-free."""
    if n <= 0:
        raise ValueError("squarefree_split needs a positive integer")
    s, d = 1, 1
    m = n
    p = 2
    while p * p <= m:
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        if e:
            s *= p ** (e // 2)
            if e % 2:
                d *= p
        p += 1 if p == 2 else 2
    d *= m
    return s, d


def _check_key(key):
    k, d, l, g = key
    if abs(k) > MAX_PI_HALF:
        raise BasisError(f"pi power {k}/2 outside |k| <= {MAX_PI_HALF}")
    if l > 1 or g > 1 or (l and g):
        raise BasisError("product of ln2/euler_gamma factors is not in the basis")
    return key


def _mul_keys(a, b):
    """Multiply two basis monomials; returns (rational factor, key)."""
    k = a[0] + b[0]
    d1, d2 = a[1], b[1]
    if d1 == 1:
        factor, d = 1, d2
    elif d2 == 1:
        factor, d = 1, d1
    else:
        g = math.gcd(d1, d2)
        factor, d = g, (d1 // g) * (d2 // g)
    return factor, _check_key((k, d, a[2] + b[2], a[3] + b[3]))


def _as_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"cannot use {type(x).__name__} as an exact rational")


class SymbolicValue:
    """Immutable exact number; see module docstring for the basis."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for key, c in terms.items():
                c = _as_fraction(c)
                if c:
                    clean[_check_key(key)] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms):
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    # -- constructors -------------------------------------------------
    @classmethod
    def rational(cls, q) -> "SymbolicValue":
        q = _as_fraction(q)
        return cls._raw({ONE_KEY: q} if q else {})

    @classmethod
    def pi_power(cls, half_power: int, coef=1) -> "SymbolicValue":
        return cls({(half_power, 1, 0, 0): coef})

    @classmethod
    def sqrt_rational(cls, r) -> "SymbolicValue":
        """Exact ``sqrt(r)`` for a nonnegative rational ``r``."""
        r = _as_fraction(r)
        if r < 0:
            raise ValueError("sqrt of a negative rational")
        if r == 0:
            return cls()
        s, d = squarefree_split(r.numerator * r.denominator)
        return cls({(0, d, 0, 0): Fraction(s, r.denominator)})

    @classmethod
    def rational_power(cls, base, exponent) -> "SymbolicValue":
        """``base**exponent`` for rational ``base > 0`` and half-integer ``exponent``."""
        base = _as_fraction(base)
        exponent = _as_fraction(exponent)
        if base <= 0:
            raise ValueError("rational_power needs a positive base")
        twice = exponent * 2
        if twice.denominator != 1:
            raise ValueError("only integer and half-integer exponents are exact here")
        twice = int(twice)
        whole = base ** (twice // 2)
        if twice % 2 == 0:
            return cls.rational(whole)
        return cls.sqrt_rational(base) * whole

    @classmethod
    def ln2(cls, coef=1) -> "SymbolicValue":
        return cls({(0, 1, 1, 0): coef})

    @classmethod
    def euler_gamma(cls, coef=1) -> "SymbolicValue":
        return cls({(0, 1, 0, 1): coef})

    @staticmethod
    def coerce(x) -> "SymbolicValue":
        if isinstance(x, SymbolicValue):
            return x
        return SymbolicValue.rational(x)

    # -- inspection ---------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def is_rational(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and ONE_KEY in self._terms)

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self._terms.get(ONE_KEY, Fraction(0))

    def coefficient(self, key) -> Fraction:
        return self._terms.get(key, Fraction(0))

    def gamma_coefficient(self) -> "SymbolicValue":
        return SymbolicValue._raw({k: c for k, c in self._terms.items() if k[3]})

    def single_monomial(self):
        """Return ``(key, coef)`` if the value is one basis monomial, else None."""
        if len(self._terms) != 1:
            return None
        return next(iter(self._terms.items()))

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, SymbolicValue):
            try:
                other = SymbolicValue.rational(other)
            except TypeError:
                return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for k, c in other._terms.items():
            v = out.get(k)
            if v is None:
                out[k] = c
            else:
                v += c
                if v:
                    out[k] = v
                else:
                    del out[k]
        return SymbolicValue._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return SymbolicValue._raw({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, SymbolicValue):
            try:
                other = SymbolicValue.rational(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, SymbolicValue):
            try:
                q = _as_fraction(other)
            except TypeError:
                return NotImplemented
            if not q:
                return SymbolicValue._raw({})
            return SymbolicValue._raw({k: c * q for k, c in self._terms.items()})
        if len(other._terms) == 1 and ONE_KEY in other._terms:
            return self * other._terms[ONE_KEY]
        if len(self._terms) == 1 and ONE_KEY in self._terms:
            return other * self._terms[ONE_KEY]
        out = {}
        for ka, ca in self._terms.items():
            for kb, cb in other._terms.items():
                f, key = _mul_keys(ka, kb)
                v = out.get(key, 0) + ca * cb * f
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)
        return SymbolicValue._raw(out)

    __rmul__ = __mul__

    def inverse(self) -> "SymbolicValue":
        mono = self.single_monomial()
        if mono is None:
            raise NotInvertible(f"cannot invert multi-term value {self}")
        (k, d, l, g), c = mono
        if l or g:
            raise NotInvertible("ln2 and euler_gamma are not invertible in the basis")
        # 1/sqrt(d) = sqrt(d)/d
        return SymbolicValue({(-k, d, 0, 0): 1 / (c * d)})

    def __truediv__(self, other):
        if isinstance(other, SymbolicValue):
            return self * other.inverse()
        q = _as_fraction(other)
        return self * (1 / q)

    def __rtruediv__(self, other):
        return SymbolicValue.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out = SymbolicValue.rational(1)
        base = self
        for _ in range(n):
            out = out * base
        return out

    # -- comparison ---------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, SymbolicValue):
            return self._terms == other._terms
        try:
            q = _as_fraction(other)
        except TypeError:
            return NotImplemented
        return self._terms == ({ONE_KEY: q} if q else {})

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    # -- numerics -----------------------------------------------------
    def evalf(self, dps: int = 30):
        """Value as an ``mpmath.mpf`` at ``dps`` decimal digits."""
        with mpmath.workdps(dps + 10):
            total = mpmath.mpf(0)
            for (k, d, l, g), c in self._terms.items():
                v = mpmath.mpf(c.numerator) / c.denominator
                if k:
                    v *= mpmath.pi ** (mpmath.mpf(k) / 2)
                if d != 1:
                    v *= mpmath.sqrt(d)
                if l:
                    v *= mpmath.log(2)
                if g:
                    v *= mpmath.euler
                total += v
            return +total

    def __float__(self):
        return float(self.evalf(20))

    def _interval(self, dps):
        iv = mpmath.iv
        iv.dps = dps
        total = iv.mpf(0)
        for (k, d, l, g), c in self._terms.items():
            v = iv.mpf(c.numerator) / iv.mpf(c.denominator)
            if k:
                v *= iv.pi ** (iv.mpf(k) / 2)
            if d != 1:
                v *= iv.sqrt(iv.mpf(d))
            if l:
                v *= iv.log(iv.mpf(2))
            if g:
                v *= iv.euler
            total += v
        return total

    def to_decimal(self, digits: int = 30) -> str:
        """Deterministic decimal string with ``digits`` significant digits.

        Rounds half-even; the interval enclosure is tightened until both
        endpoints round to the same string.
        """
        if not self._terms:
            return "0"
        ctx = Context(prec=digits, rounding=ROUND_HALF_EVEN)
        dps = digits + 15
        for _ in range(8):
            x = self._interval(dps)
            with mpmath.workdps(dps):
                lo = ctx.create_decimal(mpmath.nstr(mpmath.mpf(x.a.a), dps, strip_zeros=False))
                hi = ctx.create_decimal(mpmath.nstr(mpmath.mpf(x.b.b), dps, strip_zeros=False))
            if lo == hi:
                return format(lo, "f") if abs(lo.adjusted()) < 40 else str(lo)
            dps *= 2
        raise ArithmeticError("decimal rendering did not converge")

    # -- display ------------------------------------------------------
    def __repr__(self):
        return f"SymbolicValue({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for key in sorted(self._terms):
            c = self._terms[key]
            k, d, l, g = key
            factors = []
            if k:
                factors.append("pi" if k == 2 else f"pi^({k}/2)")
            if d != 1:
                factors.append(f"sqrt({d})")
            if l:
                factors.append("ln2")
            if g:
                factors.append("euler_gamma")
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            elif c == -1:
                parts.append("-" + "*".join(factors))
            else:
                parts.append(f"({c})*" + "*".join(factors))
        return " + ".join(parts).replace("+ -", "- ")


ZERO = SymbolicValue()
ONE = SymbolicValue.rational(1)
SQRT_PI = SymbolicValue.pi_power(1)


def gamma_exact(x) -> SymbolicValue:
    """Gamma function at a positive integer or half-integer, exactly."""
    x = _as_fraction(x)
    twice = x * 2
    if twice.denominator != 1 or x <= 0:
        raise ValueError(f"gamma_exact needs a positive (half-)integer, got {x}")
    if x.denominator == 1:
        return SymbolicValue.rational(math.factorial(int(x) - 1))
    # Gamma(m + 1/2) = (2m)! / (4^m m!) sqrt(pi)
    m = int(x - Fraction(1, 2))
    return SQRT_PI * Fraction(math.factorial(2 * m), 4**m * math.factorial(m))


def symbolic_equal(a, b) -> bool:
    """Identity of canonical forms (all exact types canonicalize on construction)."""
    return a == b
