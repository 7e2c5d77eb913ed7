"""Dense univariate polynomials with exact coefficients."""

from __future__ import annotations

from fractions import Fraction


class UniPoly:
    """Polynomial ``sum(c[i] * var**i)``; coefficients are Fractions
    (SymbolicValue also works for ring operations, not for division).

    The zero polynomial has ``degree == -1``.
    """

    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs=(), var: str = "s"):
        cs = [c if not isinstance(c, int) else Fraction(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)
        self.var = var

    @classmethod
    def monomial(cls, degree: int, coef=1, var="s"):
        return cls([0] * degree + [coef], var)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        if not self.coeffs:
            return other == 0
        return len(self.coeffs) == 1 and self.coeffs[0] == other

    def __hash__(self):
        return hash(self.coeffs)

    def _lift(self, other):
        return other if isinstance(other, UniPoly) else UniPoly([other], self.var)

    def __add__(self, other):
        other = self._lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly([self[i] + other[i] for i in range(n)], self.var)

    __radd__ = __add__

    def __neg__(self):
        return UniPoly([-c for c in self.coeffs], self.var)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, UniPoly):
            return UniPoly([c * other for c in self.coeffs], self.var)
        if not self.coeffs or not other.coeffs:
            return UniPoly([], self.var)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return UniPoly(out, self.var)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = UniPoly([1], self.var)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def divmod(self, other: "UniPoly"):
        """Euclidean division over the rationals."""
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        lead = other.coeffs[-1]
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return UniPoly([], self.var), self
        quot = [Fraction(0)] * (dq + 1)
        for k in range(dq, -1, -1):
            q = Fraction(rem[k + len(other.coeffs) - 1]) / lead
            quot[k] = q
            if q:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= q * b
        return UniPoly(quot, self.var), UniPoly(rem[: len(other.coeffs) - 1], self.var)

    def exact_div(self, other: "UniPoly") -> "UniPoly":
        q, r = self.divmod(other)
        if r:
            raise ArithmeticError("polynomial division is not exact")
        return q

    def derivative(self) -> "UniPoly":
        return UniPoly([i * c for i, c in enumerate(self.coeffs)][1:], self.var)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def shift(self, h) -> "UniPoly":
        """Return ``p(var + h)``."""
        out = UniPoly([], self.var)
        lin = UniPoly([h, 1], self.var)
        for c in reversed(self.coeffs):
            out = out * lin + c
        return out

    def __repr__(self):
        return f"UniPoly({list(self.coeffs)!r}, var={self.var!r})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if i == 0 else (self.var if i == 1 else f"{self.var}^{i}")
            if not mono:
                parts.append(f"{c}")
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"({c})*{mono}")
        return " + ".join(parts)


def det_bareiss(matrix):
    """Fraction-free determinant over an integral domain with exact division.

    ``matrix`` holds ints, Fractions or :class:`UniPoly` entries.
    """
    a = [list(row) for row in matrix]
    n = len(a)
    if n == 0:
        return 1
    is_poly = any(isinstance(x, UniPoly) for row in a for x in row)

    def div(x, y):
        if is_poly:
            return UniPoly.exact_div(x if isinstance(x, UniPoly) else UniPoly([x]),
                                     y if isinstance(y, UniPoly) else UniPoly([y]))
        return x / y if isinstance(x, Fraction) or isinstance(y, Fraction) else Fraction(x, y)

    sign = 1
    prev = UniPoly([1]) if is_poly else 1
    for k in range(n - 1):
        if not a[k][k]:
            for r in range(k + 1, n):
                if a[r][k]:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return UniPoly([]) if is_poly else 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = div(a[i][j] * a[k][k] - a[i][k] * a[k][j], prev)
        prev = a[k][k]
    res = a[n - 1][n - 1]
    return res * sign if sign == 1 else -res
