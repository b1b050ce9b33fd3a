"""Built-in example equations with their expected classification, growth and numerics."""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

import mpmath

from .algebra import Poly, RatFunc
from .classifier import Classification, Coefficients, classify
from .growth import GrowthKind, growth_report, infinite_order_scenarios
from .parser import parse_ratfunc
from .series import (
    SolutionFormInstance,
    TruncationError,
    annulus_grid,
    central_index,
    closed_form_instance,
    compare,
    cosh_form,
    default_digits,
    jexp,
    jrat,
    order_estimate,
    pole_cleared,
    residual_check,
    taylor_solve,
)

FormBuilder = Callable[[Coefficients, Classification], Optional[SolutionFormInstance]]


@dataclass(frozen=True)
class SeriesPlan:
    z0: object
    N: int
    radii: tuple[float, ...]
    expected_order: Optional[float] = None
    tol: float = 0.15
    omega: Optional[Poly] = None  # integrate W = omega * w to clear a pole of w
    hyper_radii: tuple[float, ...] = ()  # check log(nu/r)/r ~ 1 instead of a slope
    compare_N: int = 40
    compare_radius: float = 1.0
    compare_tol: float = 1e-8


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    description: str
    coefficients: tuple[str, str, str, str, str]
    primary: str
    growth: tuple[GrowthKind, Optional[Fraction]]
    form: Optional[FormBuilder] = None
    residual_annulus: tuple[complex, float, float] = (0, 0.5, 2.0)
    residual_tol: float = 1e-9
    series: Optional[SeriesPlan] = None
    scenario: Optional[str] = None
    expect_flag: Optional[str] = None

    def equation(self) -> Coefficients:
        return Coefficients(*(parse_ratfunc(t) for t in self.coefficients))


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class EntryResult:
    name: str
    checks: tuple[Check, ...]
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(ch.passed for ch in self.checks)


def _primary_form(**constants) -> FormBuilder:
    def build(c, cl):
        return closed_form_instance(cl.primary, c, **constants)

    return build


def _exp_exp(c, cl):
    return SolutionFormInstance("HomogeneousSpecial", lambda z: jexp(jexp(z)))


def _exp_minus_linear(c, cl):
    return SolutionFormInstance("Case4", lambda z: jexp(z) - z - 1)


def _sinh_half(c, cl):
    # c1 = i*pi/2 turns k2*cosh(c1 - G) into sinh(G), the entire combination
    with mpmath.workdps(2000):
        c1 = mpmath.mpc(0, mpmath.pi / 2)
    return cosh_form(cl.primary, c, c1=c1, k1=1)


Z2 = Poly((0, 0, 1))

ENTRIES: tuple[CatalogEntry, ...] = (
    CatalogEntry(
        "cosh", "alpha = 1: w = cosh(z) + 1",
        ("0", "0", "1", "0", "0"), "Case1", (GrowthKind.FINITE_ORDER, Fraction(1)),
        form=_primary_form(c1=1, c2=0),
        series=SeriesPlan(0, 256, (2, 4, 8, 16), 1.0, 0.15, compare_N=32),
    ),
    CatalogEntry(
        "exp-exp", "w''w - w'^2 - w'w = 0: w = exp(exp(z))",
        ("-1", "0", "0", "0", "0"), "HomogeneousSpecial", (GrowthKind.HYPER_ORDER_BOUND, Fraction(1)),
        form=_exp_exp,
        series=SeriesPlan(0, 400, (), hyper_radii=(3, 4), tol=0.3, compare_tol=1e-6),
        scenario="scenario1",
    ),
    CatalogEntry(
        "exp-minus-linear", "alpha = 1 - z, gamma = -z^2: w = e^z - z - 1",
        ("0", "0", "1-z", "0", "-z^2"), "Case4", (GrowthKind.FINITE_ORDER, Fraction(1)),
        form=_exp_minus_linear, residual_annulus=(1, 0.5, 2.0),
        series=SeriesPlan(1, 256, (2, 4, 8), 1.0, 0.15),
    ),
    CatalogEntry(
        "cosh-2z", "w''w - w'^2 = 1: w = cosh(2z)/2",
        ("0", "0", "0", "0", "1"), "Case5a_Rational", (GrowthKind.FINITE_ORDER, Fraction(1)),
        form=_primary_form(k1=2),
        series=SeriesPlan(0, 256, (1, 2, 4, 8), 1.0, 0.15),
    ),
    CatalogEntry(
        "order-two", "w = z^-2 cosh(z^2/2)",
        ("-1/z", "-4/z^2", "0", "0", "z^-2"), "Case5a_Rational", (GrowthKind.FINITE_ORDER, Fraction(2)),
        form=_primary_form(k1=1),
        series=SeriesPlan(1, 256, (4, 6, 8, 10), 2.0, 0.2, omega=Z2, compare_radius=0.5),
    ),
    CatalogEntry(
        "order-three-halves", "w = sinh(2/3 z^(3/2))/sqrt(z), entire",
        ("-1/(2*z)", "-3/(4*z^2)", "0", "0", "-1"), "Case5a_Rational",
        (GrowthKind.FINITE_ORDER, Fraction(3, 2)),
        form=_sinh_half, residual_annulus=(1, 0.1, 0.5), residual_tol=1e-8,
        series=SeriesPlan(1, 400, (8, 12, 16, 20), 1.5, 0.2, compare_radius=0.5),
        expect_flag="e^{int a} is HalfIntegerAlgebroid",
    ),
    CatalogEntry(
        "family-N0", "gamma = z^0 member of the beta = 0 family (alpha = 1)",
        ("0", "0", "1", "0", "1"), "Case5a_Rational", (GrowthKind.FINITE_ORDER, Fraction(1)),
        form=_primary_form(k1=1),
        series=SeriesPlan(0, 256, (2, 4, 8, 16), 1.0, 0.15),
        expect_flag="example-family claim",
    ),
    CatalogEntry(
        "family-N-2", "gamma = z^-2 member of the beta = 0 family (alpha = 1)",
        ("-1/z", "-4/z^2", "1", "0", "z^-2"), "Case5a_Rational", (GrowthKind.FINITE_ORDER, Fraction(2)),
        form=_primary_form(k1=1),
        series=SeriesPlan(1, 256, (4, 6, 8, 10), 2.0, 0.2, omega=Z2, compare_radius=0.5),
        expect_flag="example-family claim",
    ),
    CatalogEntry(
        "hyper-order-two", "a = z, b = -1 - z^2, gamma = 1: e^{2 int a} = e^{z^2}",
        ("z", "-1-z^2", "0", "0", "1"), "Case5a_Transcendental",
        (GrowthKind.HYPER_ORDER_EXACT, Fraction(2)), scenario="scenario2",
    ),
    CatalogEntry(
        "forced-rational", "alpha = z, beta = 1, b = 1: the linear reduction forces w in {0, z}",
        ("0", "1", "z", "1", "0"), "Case2", (GrowthKind.UNKNOWN, None), expect_flag="ForcedRational",
    ),
    CatalogEntry(
        "vacuous-5e", "beta = 2, gamma = 1: beta^2/4 - gamma = 0 path",
        ("0", "0", "0", "2", "1"), "Case5e", (GrowthKind.UNKNOWN, None), expect_flag="vacuous",
    ),
)

BY_NAME = {e.name: e for e in ENTRIES}


def _all_flags(cl: Classification, extra=()) -> list[str]:
    out = list(cl.warnings) + list(extra)
    for br in cl.branches:
        out.extend(br.flags)
    return out


def _series_checks(entry: CatalogEntry, c: Coefficients, form: Optional[SolutionFormInstance]) -> list[Check]:
    plan = entry.series
    out: list[Check] = []
    if form is None:
        return [Check("series", False, "no closed form to seed the series")]
    eq, seed = c, form
    if plan.omega is not None:
        eq = pole_cleared(c, plan.omega)
        omr = RatFunc(plan.omega)
        seed = SolutionFormInstance(form.label, lambda z: jrat(omr, z) * form.fn(z))
    for N, kind in ((plan.compare_N, "compare"), (plan.N, "growth")):
        w0, w1, _ = seed.evaluate(plan.z0, digits=default_digits(N) + 10)
        s = taylor_solve(eq, plan.z0, w0, w1, N)
        if kind == "compare":
            err = compare(s, seed, plan.compare_radius)
            out.append(Check("series-vs-form", err < plan.compare_tol, f"max rel diff {err:.2e}"))
            continue
        try:
            if plan.hyper_radii:
                vals = [math.log(central_index(s, r) / r) / r for r in plan.hyper_radii]
                ok = all(abs(v - 1) <= plan.tol for v in vals)
                detail = ", ".join(f"log(nu/r)/r at r={r}: {v:.3f}" for r, v in zip(plan.hyper_radii, vals))
                out.append(Check("hyper-order-signature", ok, detail))
            elif plan.expected_order is not None:
                est = order_estimate(s, plan.radii)
                ok = abs(est.order - plan.expected_order) <= plan.tol
                out.append(Check(
                    "order-estimate", ok,
                    f"{est.order:.3f} (expected {plan.expected_order} +- {plan.tol}), nu = {est.nus}",
                ))
        except TruncationError as e:
            out.append(Check("order-estimate", False, str(e)))
    return out


def run_entry(entry: CatalogEntry) -> EntryResult:
    t0 = time.perf_counter()
    checks: list[Check] = []
    c = entry.equation()
    cl = classify(c)
    checks.append(Check("primary", cl.primary.label == entry.primary, f"{cl.primary.label} of {cl.labels}"))

    g = growth_report(cl, c)
    kind, value = entry.growth
    ok = g.kind == kind and (value is None or g.value == value)
    checks.append(Check("growth", ok, f"{g.kind.value} {g.value if g.value is not None else ''} {g.diagnostic}".strip()))

    sc = infinite_order_scenarios(c)
    if entry.scenario is None:
        checks.append(Check("scenarios", not sc.any, "not flagged" if not sc.any else "unexpectedly flagged"))
    else:
        got = getattr(sc, entry.scenario)
        checks.append(Check("scenarios", got, f"{entry.scenario} {'flagged' if got else 'missing'}"))

    if entry.expect_flag is not None:
        flags = _all_flags(cl, g.flags)
        hit = [f for f in flags if entry.expect_flag in f]
        checks.append(Check("flag", bool(hit), hit[0] if hit else f"no flag containing {entry.expect_flag!r}"))

    form = entry.form(c, cl) if entry.form is not None else None
    if entry.form is not None:
        if form is None:
            checks.append(Check("residual", False, "closed form could not be instantiated"))
        else:
            center, r_in, r_out = entry.residual_annulus
            res = residual_check(c, form, annulus_grid(center, r_in, r_out, 100))
            checks.append(Check("residual", res < entry.residual_tol, f"{res:.2e} (tol {entry.residual_tol:g})"))
    if entry.series is not None:
        checks.extend(_series_checks(entry, c, form))
    return EntryResult(entry.name, tuple(checks), time.perf_counter() - t0)


def run_entry_by_name(name: str) -> EntryResult:
    return run_entry(BY_NAME[name])


def run_catalog(names: Optional[list[str]] = None, workers: Optional[int] = None) -> list[EntryResult]:
    """Run entries in parallel; results come back in catalog order."""
    todo = [e.name for e in ENTRIES] if names is None else list(names)
    for n in todo:
        if n not in BY_NAME:
            raise KeyError(f"unknown catalog entry {n!r}")
    if workers == 1 or len(todo) == 1:
        return [run_entry_by_name(n) for n in todo]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run_entry_by_name, todo))
