"""Order and hyper-order of transcendental meromorphic solutions, per branch."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .algebra import RatFunc
from .classifier import (
    Branch,
    Case1,
    Case2,
    Case3,
    Case4,
    Case5a_Rational,
    Case5a_Transcendental,
    Case5b,
    Case5c,
    Case5d,
    Case5e,
    Classification,
    Coefficients,
    HomogeneousSpecial,
    NoBranch,
)
from .toolkit import MeromorphicUeV, RationalU, exp_integral_form, rational_solutions_linear_ode, rational_sqrt


class GrowthKind(enum.Enum):
    FINITE_ORDER = "FiniteOrder"
    HYPER_ORDER_EXACT = "HyperOrderExact"
    HYPER_ORDER_BOUND = "HyperOrderBound"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class GrowthReport:
    kind: GrowthKind
    value: Optional[Fraction] = None
    exact: bool = False
    provenance: str = ""
    diagnostic: str = ""
    flags: tuple[str, ...] = ()

    @classmethod
    def finite(cls, order, provenance, flags=()) -> "GrowthReport":
        return cls(GrowthKind.FINITE_ORDER, Fraction(order), True, provenance, flags=tuple(flags))

    @classmethod
    def unknown(cls, diagnostic, provenance="") -> "GrowthReport":
        return cls(GrowthKind.UNKNOWN, None, False, provenance, diagnostic)

    def in_S1(self) -> bool:
        v = self.value
        return v is not None and v > 0 and (2 * v).denominator == 1

    def in_S2(self) -> bool:
        v = self.value
        return v is not None and v >= 1 and v.denominator == 1


@dataclass(frozen=True)
class LinearGrowth:
    """Order of transcendental solutions of y' = f y (+ rational forcing)."""

    order: Optional[int]
    diagnostic: str = ""

    @property
    def rational_only(self) -> bool:
        return self.order == 0


def linear_ode_growth(f: RatFunc) -> LinearGrowth:
    poly, _ = f.split()
    if poly:
        return LinearGrowth(1 + poly.degree)
    e = exp_integral_form(f)
    if isinstance(e, RationalU):
        return LinearGrowth(0, "e^{int f} rational")
    return LinearGrowth(None, f"e^{{int f}} is {e.kind}")


def _from_linear(f: RatFunc, provenance: str) -> GrowthReport:
    lg = linear_ode_growth(f)
    if lg.order is None:
        return GrowthReport.unknown(f"branched reduction: {lg.diagnostic}", provenance)
    if lg.order == 0:
        return GrowthReport.unknown("reduction admits only rational solutions (order 0)", provenance)
    return GrowthReport.finite(lg.order, provenance)


def _case3_growth(a: RatFunc, b: RatFunc) -> GrowthReport:
    p, _ = a.split()
    if p:
        m2 = p.degree
        return GrowthReport(
            GrowthKind.HYPER_ORDER_BOUND, Fraction(m2 + 1), False,
            "hyper-order <= deg(poly part of a) + 1",
        )
    sols = rational_solutions_linear_ode(-a, -b)
    prov = "order = m1 + 1, h ~ eta z^m1"
    if not sols.complete and not sols.found:
        return GrowthReport.unknown("rational h search bound-exhausted", prov)
    if not sols.found:
        return GrowthReport.unknown("no rational h: branch admits no transcendental solution", prov)
    degs = [h.degree_at_infinity()[0] for h in (sols.particular, sols.homogeneous) if h]
    if not degs:
        return GrowthReport.unknown("h == 0: only rational solutions", prov)
    m1 = max(degs)
    if m1 < 0:
        return GrowthReport.unknown("h -> 0 at infinity: no transcendental solution", prov)
    return GrowthReport.finite(m1 + 1, prov)


def _monomial_exponent(f: RatFunc) -> Optional[int]:
    if f.is_zero() or any(f.numer.coeffs[:-1]) or any(f.denom.coeffs[:-1]):
        return None
    return f.numer.degree - f.denom.degree


def _family_flag(c: Coefficients) -> tuple[str, ...]:
    """Flag the stated order of the beta = 0, gamma = lambda z^N, a = N/(2z) family."""
    N = _monomial_exponent(c.gamma)
    if c.beta or N is None or c.a != RatFunc.const(Fraction(N, 2)) / RatFunc.z():
        return ()
    return (
        f"example-family claim: order (1-N)/2 = {Fraction(1 - N, 2)} is unverified; "
        f"formula (m3+2)/2 gives {Fraction(2 - N, 2)}",
    )


def growth_report(cl: Union[Classification, Branch], c: Coefficients) -> GrowthReport:
    br = cl.primary if isinstance(cl, Classification) else cl

    if isinstance(br, NoBranch):
        return GrowthReport.unknown("no branch: no transcendental meromorphic solution")
    if isinstance(br, Case1):
        return GrowthReport.finite(1, "cosh form has order 1")
    if br.consistency and not isinstance(br, Case3) and not any(r.consistent for r in br.consistency):
        st = br.consistency[0].status.value
        return GrowthReport.unknown(f"reduction {st}: no transcendental solution of the full equation")
    if isinstance(br, (HomogeneousSpecial, Case3)):
        return _case3_growth(c.a, c.b)
    if isinstance(br, Case2):
        e = exp_integral_form(-br.h)
        prov = "w = u e^v, order = deg v"
        if isinstance(e, MeromorphicUeV):
            return GrowthReport.finite(e.v.degree, prov)
        return _from_linear(-br.h, prov)
    if isinstance(br, Case4):
        return _from_linear(br.h1, "w' = h1 w + h2, order = deg v1")
    if isinstance(br, Case5a_Rational):
        u1 = Fraction(1 if br.k1sq is None else br.k1sq) / br.R
        m3, _ = u1.degree_at_infinity()
        prov = "order = (m3 + 2)/2, u1 = k1^2 e^{-2 int a} ~ z^m3"
        if m3 < -1:
            return GrowthReport.unknown(f"m3 = {m3} < -1", prov)
        return GrowthReport.finite(Fraction(m3 + 2, 2), prov, _family_flag(c))
    if isinstance(br, Case5a_Transcendental):
        return GrowthReport(
            GrowthKind.HYPER_ORDER_EXACT, Fraction(br.v1.degree), True,
            "hyper-order = m4 = deg v1, e^{2 int a} = u1 e^{v1}",
        )
    if isinstance(br, Case5b):
        prov = "w + K R/(2k1^2) = exp(int g), g = -A/2 + k1 e^{-int a}"
        if br.r is None:
            return GrowthReport.unknown("e^{int a} not rational", prov)
        k1 = rational_sqrt(br.k1sq)
        p1, _ = (-br.A / 2).split()
        p2, _ = br.r.inverse().split()
        if k1 is not None:
            return _from_linear(-br.A / 2 + br.r.inverse() * k1, prov)
        deg = max(p1.degree, p2.degree)
        if deg < 0:
            return GrowthReport.unknown("g has no polynomial part", prov)
        return GrowthReport.finite(deg + 1, prov)
    if isinstance(br, Case5c):
        return _from_linear(c.a, "generator H' = a H + k1, w quadratic in H")
    if isinstance(br, (Case5d, Case5e)):
        return _from_linear(br.p, "w' = -(A/2) w + rational forcing")
    return GrowthReport.unknown(f"unhandled branch {br.label}")


@dataclass(frozen=True)
class ScenarioReport:
    scenario1: bool
    scenario2: bool
    conditions: dict

    @property
    def any(self) -> bool:
        return self.scenario1 or self.scenario2


def _a_not_to_zero(a: RatFunc) -> bool:
    return bool(a) and a.degree_at_infinity()[0] >= 0


def infinite_order_scenarios(c: Coefficients) -> ScenarioReport:
    """The two coefficient configurations that admit infinite-order solutions."""
    a, b, al, be, ga = c.as_tuple()
    a_nz = _a_not_to_zero(a)
    s1 = {
        "gamma == 0": ga.is_zero(),
        "alpha + beta' + a beta == 0": (al + be.derivative() + a * be).is_zero(),
        "a does not tend to 0": a_nz,
    }
    s2 = {"gamma != 0": not ga.is_zero(), "alpha == beta == 0": al.is_zero() and be.is_zero()}
    if ga:
        gl = ga.derivative() / ga
        s2["2(a'+a^2+b) + (g'/g)' + a g'/g == 0"] = (
            2 * (a.derivative() + a * a + b) + gl.derivative() + a * gl
        ).is_zero()
    else:
        s2["2(a'+a^2+b) + (g'/g)' + a g'/g == 0"] = False
    s2["a does not tend to 0"] = a_nz
    return ScenarioReport(all(s1.values()), all(s2.values()), {"scenario1": s1, "scenario2": s2})
