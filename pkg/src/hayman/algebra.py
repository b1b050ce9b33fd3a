"""Exact univariate polynomial and rational-function arithmetic over Q.

Everything here is immutable. Coefficients are :class:`fractions.Fraction`
and polynomials are stored low-to-high (index = power of ``z``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Number = Union[int, Fraction]

#: degree of the zero polynomial
NEG_INF = -math.inf

#: default threshold below which ``|denom(z)|`` counts as a pole
EPS_POLE = 1e-9


class Poly:
    """Univariate polynomial with rational coefficients."""

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable[Number] = ()):
        cs = [c if isinstance(c, Fraction) else Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)
        self._hash = None

    # constructors -------------------------------------------------------
    @classmethod
    def const(cls, c: Number) -> "Poly":
        return cls((c,))

    @classmethod
    def monomial(cls, c: Number, n: int) -> "Poly":
        return cls([0] * n + [c])

    @classmethod
    def z(cls) -> "Poly":
        return cls((0, 1))

    # structure ------------------------------------------------------------
    @property
    def degree(self):
        """Degree, or ``NEG_INF`` for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_const(self) -> bool:
        return len(self.coeffs) <= 1

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Poly.const(other).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(("Poly", self.coeffs))
        return self._hash

    # arithmetic -------------------------------------------------------------
    @staticmethod
    def _coerce(other) -> "Poly":
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(other)
        return NotImplemented

    def __neg__(self) -> "Poly":
        return Poly(-c for c in self.coeffs)

    def __add__(self, other) -> "Poly":
        other = Poly._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out)

    __radd__ = __add__

    def __sub__(self, other) -> "Poly":
        other = Poly._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return Poly._coerce(other) - self

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return Poly(c * other for c in self.coeffs)
        other = Poly._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result, base = Poly.const(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        other = Poly._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(other.coeffs) - 1
        if len(rem) - 1 < dq:
            return Poly(), self
        quot = [Fraction(0)] * (len(rem) - dq)
        inv = 1 / other.lc
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k] * inv
            if c:
                quot[k - dq] = c
                for j, b in enumerate(other.coeffs):
                    rem[k - dq + j] -= c * b
        return Poly(quot), Poly(rem[:dq])

    def __floordiv__(self, other) -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "Poly":
        return divmod(self, other)[1]

    def exquo(self, other: "Poly") -> "Poly":
        """Exact quotient; raises if ``other`` does not divide ``self``."""
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError("inexact polynomial division")
        return q

    # calculus / evaluation ----------------------------------------------
    def derivative(self) -> "Poly":
        return Poly(i * c for i, c in enumerate(self.coeffs) if i)

    def antiderivative(self) -> "Poly":
        return Poly([0] + [c / (i + 1) for i, c in enumerate(self.coeffs)])

    def __call__(self, x):
        acc = 0 * x if not isinstance(x, (int, Fraction)) else Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_complex(self, x: complex) -> complex:
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * x + float(c)
        return acc

    def monic(self) -> "Poly":
        if not self.coeffs or self.lc == 1:
            return self
        inv = 1 / self.lc
        return Poly(c * inv for c in self.coeffs)

    def shift(self, s: Number) -> "Poly":
        """Return ``p(z + s)``."""
        s = Fraction(s)
        out = [Fraction(0)] * len(self.coeffs)
        # Horner in the shifted variable
        for c in reversed(self.coeffs):
            for i in range(len(out) - 1, 0, -1):
                out[i] = out[i] * s + out[i - 1]
            out[0] = out[0] * s + c
        return Poly(out)

    def integer_coeffs(self) -> list[int]:
        """Coefficients scaled by the lcm of denominators (content kept)."""
        den = 1
        for c in self.coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        return [int(c * den) for c in self.coeffs]

    # printing ---------------------------------------------------------------
    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"Poly({format_poly(self)!r})"


def _fmt_frac(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_poly(p: Poly, var: str = "z") -> str:
    """Expanded form, highest power first, e.g. ``3/4*z^2 - z + 1/2``."""
    if p.is_zero():
        return "0"
    parts: list[str] = []
    for k in range(len(p.coeffs) - 1, -1, -1):
        c = p.coeffs[k]
        if c == 0:
            continue
        neg = c < 0
        mag = -c if neg else c
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if not mono:
            body = _fmt_frac(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{_fmt_frac(mag)}*{mono}"
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)


# ---------------------------------------------------------------------------
# polynomial algorithms


def poly_gcd(p: Poly, q: Poly) -> Poly:
    """Monic gcd; ``gcd(0, 0) = 0``."""
    a, b = p, q
    while b:
        a, b = b, (a % b).monic()
    return a.monic()


@dataclass(frozen=True)
class SquarefreeDecomp:
    factors: tuple[tuple[Poly, int], ...]
    unit: Fraction

    def expand(self) -> Poly:
        out = Poly.const(self.unit)
        for f, m in self.factors:
            out = out * f**m
        return out

    def squarefree_part(self) -> Poly:
        out = Poly.const(1)
        for f, _ in self.factors:
            out = out * f
        return out


def squarefree_decomposition(p: Poly) -> SquarefreeDecomp:
    """Yun's algorithm. Factors are monic, squarefree and pairwise coprime."""
    if p.is_zero():
        raise ValueError("squarefree decomposition of the zero polynomial")
    unit = p.lc
    f = p.monic()
    if f.degree == 0:
        return SquarefreeDecomp((), unit)
    fp = f.derivative()
    a0 = poly_gcd(f, fp)
    b = f.exquo(a0)
    c = fp.exquo(a0)
    d = c - b.derivative()
    factors = []
    i = 1
    while b.degree > 0:
        a = poly_gcd(b, d)
        if a.degree > 0:
            factors.append((a, i))
        b = b.exquo(a)
        c = d.exquo(a)
        d = c - b.derivative()
        i += 1
    return SquarefreeDecomp(tuple(factors), unit)


def squarefree_part(p: Poly) -> Poly:
    if p.degree <= 0:
        return Poly.const(1)
    return p.monic().exquo(poly_gcd(p, p.derivative()))


def _det(rows: list[list[Fraction]]) -> Fraction:
    m = [list(r) for r in rows]
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        pv = m[col][col]
        det *= pv
        for r in range(col + 1, n):
            f = m[r][col]
            if f:
                f /= pv
                row_c = m[col]
                row_r = m[r]
                for k in range(col, n):
                    row_r[k] -= f * row_c[k]
    return det


def _sylvester_det(q: Sequence[Fraction], p: Sequence[Fraction]) -> Fraction:
    """det Sylvester(q, p) = lc(q)^deg(p) * prod_{q(x)=0} p(x).

    ``p`` is taken at its formal length (leading zeros allowed); ``q`` must
    have a nonzero leading coefficient.
    """
    m = len(q) - 1
    d = len(p) - 1
    size = m + d
    if size == 0:
        return Fraction(1)
    rows = []
    qh = list(reversed(q))
    ph = list(reversed(p))
    for i in range(d):
        rows.append([Fraction(0)] * i + qh + [Fraction(0)] * (size - i - m - 1))
    for i in range(m):
        rows.append([Fraction(0)] * i + ph + [Fraction(0)] * (size - i - d - 1))
    return _det(rows)


def _interpolate(xs: Sequence[Fraction], ys: Sequence[Fraction]) -> Poly:
    # Newton divided differences
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    out = Poly.const(coef[-1])
    for i in range(n - 2, -1, -1):
        out = out * Poly((-xs[i], 1)) + coef[i]
    return out


def resultant(p: Sequence[Poly], q: Poly) -> Poly:
    """Resultant w.r.t. ``z`` of ``p`` (coefficients in ``t``) and ``q``.

    ``p[k]`` is the coefficient of ``z**k``, itself a polynomial in ``t``.
    The result is ``lc(q)**D * prod_{q(x)=0} p(x, t)`` with ``D`` the formal
    ``z``-degree of ``p``, computed exactly by evaluation at integer ``t`` and
    interpolation.
    """
    if q.is_zero():
        raise ValueError("resultant with the zero polynomial")
    p = list(p)
    while len(p) > 1 and p[-1].is_zero():
        p.pop()
    if not p:
        p = [Poly()]
    m = q.degree
    tdeg = max((c.degree for c in p if c), default=0)
    bound = int(m * max(tdeg, 0))
    xs = [Fraction(k) for k in range(bound + 1)]
    ys = [_sylvester_det(q.coeffs, [c(x) for c in p]) for x in xs]
    return _interpolate(xs, ys)


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i * i != n:
                large.append(n // i)
        i += 1
    return small + large[::-1]


def rational_roots(p: Poly) -> list[tuple[Fraction, int]]:
    """All rational roots with multiplicity, by divisor enumeration."""
    if p.is_zero():
        raise ValueError("rational roots of the zero polynomial")
    out: list[tuple[Fraction, int]] = []
    work = p
    k = 0
    while work.degree > 0 and work[0] == 0:
        work = Poly(work.coeffs[1:])
        k += 1
    if k:
        out.append((Fraction(0), k))
    if work.degree <= 0:
        return out
    sf = squarefree_part(work)
    ic = sf.integer_coeffs()
    g = 0
    for c in ic:
        g = math.gcd(g, c)
    ic = [c // g for c in ic]
    cands = set()
    for num in _divisors(ic[0]):
        for den in _divisors(ic[-1]):
            cands.add(Fraction(num, den))
            cands.add(Fraction(-num, den))
    for r in sorted(cands):
        if sf(r) == 0:
            lin = Poly((-r, 1))
            mult = 0
            q = work
            while True:
                quo, rem = divmod(q, lin)
                if rem:
                    break
                q = quo
                mult += 1
            out.append((r, mult))
    out.sort()
    return out


# ---------------------------------------------------------------------------
# rational functions


class _PoleMarker:
    __slots__ = ()

    def __repr__(self) -> str:
        return "POLE"

    def __bool__(self) -> bool:
        return False


#: returned by :func:`rf_eval_complex` when the denominator is below ``eps``
POLE = _PoleMarker()


class RatFunc:
    """Normalized rational function ``numer/denom``: monic denominator, coprime."""

    __slots__ = ("numer", "denom", "_hash")

    def __init__(self, numer: Union[Poly, Number] = 0, denom: Union[Poly, Number] = 1):
        n = numer if isinstance(numer, Poly) else Poly.const(numer)
        d = denom if isinstance(denom, Poly) else Poly.const(denom)
        if d.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if n.is_zero():
            n, d = Poly(), Poly.const(1)
        elif d.degree > 0:
            g = poly_gcd(n, d)
            if g.degree > 0:
                n, d = n.exquo(g), d.exquo(g)
        if d.lc != 1:
            inv = 1 / d.lc
            n, d = n * inv, d * inv
        self.numer = n
        self.denom = d
        self._hash = None

    @classmethod
    def z(cls) -> "RatFunc":
        return cls(Poly.z())

    @classmethod
    def const(cls, c: Number) -> "RatFunc":
        return cls(Poly.const(c))

    @staticmethod
    def _coerce(other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, Poly):
            return RatFunc(other)
        if isinstance(other, (int, Fraction)):
            return RatFunc(Poly.const(other))
        return NotImplemented

    # structure ------------------------------------------------------------
    def is_zero(self) -> bool:
        return self.numer.is_zero()

    def __bool__(self) -> bool:
        return not self.numer.is_zero()

    def is_const(self) -> bool:
        return self.denom.degree == 0 and self.numer.degree <= 0

    def is_poly(self) -> bool:
        return self.denom.degree == 0

    def __eq__(self, other) -> bool:
        other = RatFunc._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.numer == other.numer and self.denom == other.denom

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(("RatFunc", self.numer.coeffs, self.denom.coeffs))
        return self._hash

    # arithmetic -------------------------------------------------------------
    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.numer, self.denom)

    def __add__(self, other) -> "RatFunc":
        other = RatFunc._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.denom == other.denom:
            return RatFunc(self.numer + other.numer, self.denom)
        return RatFunc(self.numer * other.denom + other.numer * self.denom, self.denom * other.denom)

    __radd__ = __add__

    def __sub__(self, other) -> "RatFunc":
        other = RatFunc._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "RatFunc":
        return RatFunc._coerce(other) - self

    def __mul__(self, other) -> "RatFunc":
        if isinstance(other, (int, Fraction)):
            return RatFunc(self.numer * other, self.denom)
        other = RatFunc._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RatFunc(self.numer * other.numer, self.denom * other.denom)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise ZeroDivisionError("inverse of the zero rational function")
        return RatFunc(self.denom, self.numer)

    def __truediv__(self, other) -> "RatFunc":
        other = RatFunc._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(self.numer * other.denom, self.denom * other.numer)

    def __rtruediv__(self, other) -> "RatFunc":
        return RatFunc._coerce(other) / self

    def __pow__(self, n: int) -> "RatFunc":
        if n < 0:
            return self.inverse() ** (-n)
        return RatFunc(self.numer**n, self.denom**n)

    def derivative(self) -> "RatFunc":
        n, d = self.numer, self.denom
        if d.degree == 0:
            return RatFunc(n.derivative(), d)
        return RatFunc(n.derivative() * d - n * d.derivative(), d * d)

    def shift(self, s: Number) -> "RatFunc":
        """Return ``f(z + s)``."""
        return RatFunc(self.numer.shift(s), self.denom.shift(s))

    def split(self) -> tuple[Poly, "RatFunc"]:
        q, r = divmod(self.numer, self.denom)
        return q, RatFunc(r, self.denom)

    def degree_at_infinity(self) -> tuple[int, Fraction]:
        if self.is_zero():
            raise ValueError("degree at infinity of the zero function")
        return self.numer.degree - self.denom.degree, self.numer.lc / self.denom.lc

    def __call__(self, x: Number) -> Fraction:
        d = self.denom(Fraction(x))
        if d == 0:
            raise ZeroDivisionError(f"pole at z = {x}")
        return self.numer(Fraction(x)) / d

    def eval_complex(self, x: complex, eps: float = EPS_POLE):
        d = self.denom.eval_complex(x)
        if abs(d) < eps:
            return POLE
        return self.numer.eval_complex(x) / d

    def __str__(self) -> str:
        if self.denom.degree == 0:
            return format_poly(self.numer)
        return f"({format_poly(self.numer)})/({format_poly(self.denom)})"

    def __repr__(self) -> str:
        return f"RatFunc({str(self)!r})"


ZERO = RatFunc()
ONE = RatFunc.const(1)
Z = RatFunc.z()


def rf_normalize(n: Poly, d: Poly) -> RatFunc:
    return RatFunc(n, d)


def rf_arith(f: RatFunc, g: RatFunc, op: str) -> RatFunc:
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    if op == "div":
        return f / g
    raise ValueError(f"unknown operation {op!r}")


def rf_derivative(f: RatFunc) -> RatFunc:
    return f.derivative()


def rf_split(f: RatFunc) -> tuple[Poly, RatFunc]:
    return f.split()


def degree_at_infinity(f: RatFunc) -> tuple[int, Fraction]:
    return f.degree_at_infinity()


def rf_eval_complex(f: RatFunc, z: complex, eps: float = EPS_POLE):
    """Horner evaluation; returns :data:`POLE` when ``|denom(z)| < eps``."""
    return f.eval_complex(z, eps)
