"""Decidable predicates over Q(z) used by the classifier.

Residues come from the Rothstein-Trager resultant plus exact rational root
extraction; nothing in here does numeric root finding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .algebra import (
    Poly,
    RatFunc,
    poly_gcd,
    rational_roots,
    resultant,
    squarefree_decomposition,
)


# ---------------------------------------------------------------------------
# residues


@dataclass(frozen=True)
class ResidueSpectrum:
    spectrum_poly: Poly
    rational_residues: tuple[tuple[Fraction, Poly], ...]
    all_poles_simple: bool
    nonrational_residues_present: bool

    def residues(self) -> list[Fraction]:
        return [t for t, _ in self.rational_residues]


def _rt_residues(numer: Poly, cofactor: Poly, c: Poly):
    """Residues of ``numer/(c*cofactor)`` at the roots of squarefree ``c``.

    Requires gcd(c, cofactor) = 1. Returns the spectrum polynomial, the
    rational residues with their gcd components, and whether some root of
    ``c`` carries a residue outside Q.
    """
    m = c.derivative() * cofactor
    width = max(len(numer), len(m), 1)
    p_t = [Poly((numer[k], -m[k])) for k in range(width)]
    spec = resultant(p_t, c)
    comps = []
    covered = 0
    if spec.degree > 0:
        for t, _mult in rational_roots(spec):
            g = poly_gcd(numer - m * t, c)
            if g.degree > 0:
                comps.append((t, g))
                covered += g.degree
    return spec, tuple(comps), covered < c.degree


def residue_spectrum(f: RatFunc) -> ResidueSpectrum:
    """Residue data of the proper part of ``f``."""
    _, proper = f.split()
    n, d = proper.numer, proper.denom
    simple = poly_gcd(d, d.derivative()).degree <= 0 if d.degree > 0 else True
    if simple:
        spec, comps, nonrat = _rt_residues(n, Poly.const(1), d)
        return ResidueSpectrum(spec, comps, True, nonrat)
    sf = squarefree_decomposition(d).squarefree_part()
    width = max(len(n), len(d), 1)
    dp = d.derivative()
    spec = resultant([Poly((n[k], -dp[k])) for k in range(width)], sf)
    return ResidueSpectrum(spec, (), False, False)


# ---------------------------------------------------------------------------
# e^{\int f}


@dataclass(frozen=True)
class RationalU:
    """``e^{int f} = const * u`` with ``u`` rational."""

    u: RatFunc

    @property
    def kind(self) -> str:
        return "RationalU"


@dataclass(frozen=True)
class MeromorphicUeV:
    """``e^{int f} = const * u * e^v`` with ``v`` a nonconstant polynomial."""

    u: RatFunc
    v: Poly

    @property
    def kind(self) -> str:
        return "MeromorphicUeV"


@dataclass(frozen=True)
class HalfIntegerAlgebroid:
    diagnostics: str
    residues: tuple[Fraction, ...] = ()

    @property
    def kind(self) -> str:
        return "HalfIntegerAlgebroid"


@dataclass(frozen=True)
class NotMeromorphic:
    diagnostics: str

    @property
    def kind(self) -> str:
        return "NotMeromorphic"


ExpIntegralClass = Union[RationalU, MeromorphicUeV, HalfIntegerAlgebroid, NotMeromorphic]


def exp_integral_form(f: RatFunc) -> ExpIntegralClass:
    """Classify ``e^{int f}`` for rational ``f``."""
    poly, proper = f.split()
    if proper.is_zero():
        if poly.is_zero():
            return RationalU(RatFunc.const(1))
        return MeromorphicUeV(RatFunc.const(1), poly.antiderivative())
    spec = residue_spectrum(proper)
    if not spec.all_poles_simple:
        return NotMeromorphic("multiple pole: essential singularity of e^{int f}")
    if spec.nonrational_residues_present:
        return NotMeromorphic("nonrational residue spectrum")
    res = spec.residues()
    if all(t.denominator == 1 for t in res):
        u = RatFunc.const(1)
        for t, g in spec.rational_residues:
            u = u * RatFunc(g) ** int(t)
        if poly.is_zero():
            return RationalU(u)
        return MeromorphicUeV(u, poly.antiderivative())
    if all((2 * t).denominator == 1 for t in res):
        return HalfIntegerAlgebroid("residues in (1/2)Z, not all integers", tuple(res))
    return NotMeromorphic("residues outside (1/2)Z")


def poly_antiderivative(p: Poly) -> Poly:
    return p.antiderivative()


# ---------------------------------------------------------------------------
# squares and constants


def _rational_sqrt(c: Fraction) -> Optional[Fraction]:
    if c < 0:
        return None
    rn, rd = math.isqrt(c.numerator), math.isqrt(c.denominator)
    if rn * rn == c.numerator and rd * rd == c.denominator:
        return Fraction(rn, rd)
    return None


def _poly_sqrt(p: Poly) -> Optional[Poly]:
    if p.is_zero():
        return Poly()
    dec = squarefree_decomposition(p)
    unit = _rational_sqrt(dec.unit)
    if unit is None:
        return None
    out = Poly.const(unit)
    for fac, m in dec.factors:
        if m % 2:
            return None
        out = out * fac ** (m // 2)
    return out


def is_square(f: RatFunc) -> Optional[RatFunc]:
    """``s`` with ``s**2 == f`` and positive leading coefficient, if any."""
    n = _poly_sqrt(f.numer)
    if n is None:
        return None
    d = _poly_sqrt(f.denom)
    if d is None:
        return None
    return RatFunc(n, d)


def rational_sqrt(c: Fraction) -> Optional[Fraction]:
    return _rational_sqrt(Fraction(c))


def constant_value(f: RatFunc) -> Optional[Fraction]:
    if f.denom.degree == 0 and f.numer.degree <= 0:
        return f.numer[0]
    return None


@dataclass(frozen=True)
class ScalarSolutions:
    """Solution set of ``P + c*Q = const``: ``free`` means every ``c`` works."""

    values: tuple[Fraction, ...] = ()
    free: bool = False

    def __bool__(self) -> bool:
        return self.free or bool(self.values)


def solve_scalar_for_constancy(P: RatFunc, Q: RatFunc) -> ScalarSolutions:
    Qp = Q.derivative()
    if Qp.is_zero():
        return ScalarSolutions(free=True) if P.derivative().is_zero() else ScalarSolutions()
    c = constant_value(-P.derivative() / Qp)
    if c is None:
        return ScalarSolutions()
    return ScalarSolutions((c,))


# ---------------------------------------------------------------------------
# rational solutions of y' = f*y + g

DEFAULT_MAX_POLE_ORDER = 30
DEFAULT_MAX_NUMER_DEGREE = 30


@dataclass(frozen=True)
class LinearODESolutions:
    """Rational solutions ``particular + c*homogeneous`` of ``y' = f y + g``.

    ``particular`` is None when no rational solution exists; ``homogeneous``
    is None when the solution (if any) is unique. ``complete`` is False when
    a search bound was hit, so absent solutions are not proven absent.
    """

    particular: Optional[RatFunc]
    homogeneous: Optional[RatFunc] = None
    complete: bool = True
    diagnostics: tuple[str, ...] = ()

    @property
    def found(self) -> bool:
        return self.particular is not None

    @property
    def has_free_constant(self) -> bool:
        return self.homogeneous is not None

    def instantiate(self, c: Fraction = Fraction(0)) -> RatFunc:
        if self.particular is None:
            raise ValueError("no rational solution")
        if self.homogeneous is None:
            return self.particular
        return self.particular + self.homogeneous * c

    def members(self) -> list[RatFunc]:
        """Representative members: the particular one and, if free, particular + basis."""
        if self.particular is None:
            return []
        out = [self.particular]
        if self.homogeneous is not None:
            out.append(self.particular + self.homogeneous)
        return out


def _coprime_pieces(df: Poly, dg: Poly) -> list[tuple[Poly, int, int]]:
    """Pairwise coprime squarefree pieces with uniform pole orders in f and g."""
    pieces: list[tuple[Poly, int, int]] = []
    if df.degree > 0:
        pieces = [(a, i, 0) for a, i in squarefree_decomposition(df).factors]
    if dg.degree > 0:
        for b, j in squarefree_decomposition(dg).factors:
            rest = b
            new = []
            for c, of, og in pieces:
                g = poly_gcd(c, rest)
                if g.degree > 0:
                    new.append((g, of, j))
                    rest = rest.exquo(g)
                    co = c.exquo(g)
                    if co.degree > 0:
                        new.append((co, of, og))
                else:
                    new.append((c, of, og))
            pieces = new
            if rest.degree > 0:
                pieces.append((rest, 0, j))
    return pieces


def _rref_solve(cols: list[list[Fraction]], rhs: list[Fraction]):
    """Solve sum_i x_i*cols[i] = rhs. Returns (particular or None, nullspace basis)."""
    nvar = len(cols)
    nrow = len(rhs)
    m = [[cols[j][r] for j in range(nvar)] + [rhs[r]] for r in range(nrow)]
    pivots = []
    row = 0
    for col in range(nvar):
        piv = next((r for r in range(row, nrow) if m[r][col] != 0), None)
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        inv = 1 / m[row][col]
        m[row] = [x * inv for x in m[row]]
        for r in range(nrow):
            if r != row and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[row])]
        pivots.append(col)
        row += 1
        if row == nrow:
            break
    for r in range(row, nrow):
        if m[r][nvar] != 0:
            return None, []
    free = [j for j in range(nvar) if j not in pivots]
    part = [Fraction(0)] * nvar
    for i, col in enumerate(pivots):
        part[col] = m[i][nvar]
    basis = []
    for fj in free:
        vec = [Fraction(0)] * nvar
        vec[fj] = Fraction(1)
        for i, col in enumerate(pivots):
            vec[col] = -m[i][fj]
        basis.append(vec)
    return part, basis


def rational_solutions_linear_ode(
    f: RatFunc,
    g: RatFunc,
    max_pole_order: int = DEFAULT_MAX_POLE_ORDER,
    max_numer_degree: int = DEFAULT_MAX_NUMER_DEGREE,
) -> LinearODESolutions:
    """All rational ``y`` with ``y' = f*y + g`` (within the search bounds)."""
    complete = True
    notes: list[str] = []
    df, dg = f.denom, g.denom

    # candidate denominator from local balance at each pole of f or g
    denom = Poly.const(1)
    for c, of, og in _coprime_pieces(df, dg):
        parts: list[tuple[Poly, int]] = []
        if of == 1:
            _, comps, _ = _rt_residues(f.numer, df.exquo(c), c)
            rest = c
            for t, comp in comps:
                parts.append((comp, max(math.ceil(-t), og)))
                rest = rest.exquo(comp)
            if rest.degree > 0:
                parts.append((rest, og))
        else:
            parts.append((c, og))
        for piece, bound in parts:
            if bound > max_pole_order:
                complete = False
                notes.append(f"pole order bound {bound} capped at {max_pole_order}")
                bound = max_pole_order
            if bound > 0:
                denom = denom * piece**bound

    # degree bound at infinity
    cands = [0]
    dfi = f.degree_at_infinity() if f else None
    dgi = g.degree_at_infinity() if g else None
    if dgi is not None:
        cands.append(dgi[0] + 1)
        if dfi is not None:
            cands.append(dgi[0] - dfi[0])
    if dfi is not None and dfi[0] == -1 and dfi[1].denominator == 1:
        cands.append(int(dfi[1]))
    ndeg = max(cands) + denom.degree
    if ndeg > max_numer_degree:
        complete = False
        notes.append(f"numerator degree bound {ndeg} capped at {max_numer_degree}")
        ndeg = max_numer_degree

    if ndeg < 0:
        sols = LinearODESolutions(RatFunc() if g.is_zero() else None, None, complete, tuple(notes))
        return sols

    # (P'D - P D') df dg - nf dg P D - ng df D^2 = 0, linear in the coefficients of P
    D, Dp = denom, denom.derivative()
    nf, ng = f.numer, g.numer
    cols = []
    for i in range(ndeg + 1):
        zi = Poly.monomial(1, i)
        e = (zi.derivative() * D - zi * Dp) * df * dg - nf * dg * zi * D
        cols.append(e)
    const = -(ng * df * D * D)
    nrow = max([len(c) for c in cols] + [len(const), 1])
    colv = [[c[r] for r in range(nrow)] for c in cols]
    rhs = [-const[r] for r in range(nrow)]
    part, basis = _rref_solve(colv, rhs)
    if part is None:
        return LinearODESolutions(None, None, complete, tuple(notes))
    if len(basis) > 1:
        raise ArithmeticError("homogeneous rational solution space of dimension > 1")
    y_p = RatFunc(Poly(part), D)
    y_h = RatFunc(Poly(basis[0]), D) if basis else None
    for y, rhs_term in ((y_p, g), (y_h, RatFunc())):
        if y is not None and y.derivative() - f * y - rhs_term:
            raise ArithmeticError("rational solution failed back-substitution")
    return LinearODESolutions(y_p, y_h, complete, tuple(notes))
