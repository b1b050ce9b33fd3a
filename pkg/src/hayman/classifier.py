"""Branch classification for  w''w - w'^2 + a w'w + b w^2 = alpha w + beta w' + gamma.

``classify`` walks the list of admissible solution forms and reports every
branch whose coefficient conditions hold exactly. Branches that reduce the
equation to a first-order linear ODE carry a :class:`ConsistencyReport`
obtained by substituting the reduction back into the equation.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional

from .algebra import Poly, RatFunc
from .toolkit import (
    LinearODESolutions,
    MeromorphicUeV,
    RationalU,
    constant_value,
    exp_integral_form,
    is_square,
    rational_roots,
    rational_sqrt,
    rational_solutions_linear_ode,
    solve_scalar_for_constancy,
)

ZERO = RatFunc()


@dataclass(frozen=True)
class Coefficients:
    a: RatFunc = ZERO
    b: RatFunc = ZERO
    alpha: RatFunc = ZERO
    beta: RatFunc = ZERO
    gamma: RatFunc = ZERO

    @classmethod
    def of(cls, a=0, b=0, alpha=0, beta=0, gamma=0) -> "Coefficients":
        return cls(*(RatFunc._coerce(x) for x in (a, b, alpha, beta, gamma)))

    def as_tuple(self) -> tuple[RatFunc, ...]:
        return (self.a, self.b, self.alpha, self.beta, self.gamma)

    def shift(self, s) -> "Coefficients":
        return Coefficients(*(f.shift(s) for f in self.as_tuple()))

    def scale(self, c) -> "Coefficients":
        """(alpha, beta, gamma) -> (c alpha, c beta, c^2 gamma), i.e. w -> c w."""
        c = Fraction(c)
        return Coefficients(self.a, self.b, self.alpha * c, self.beta * c, self.gamma * (c * c))

    def residual(self, w: RatFunc) -> RatFunc:
        """Left side minus right side for a rational ``w``."""
        w1 = w.derivative()
        w2 = w1.derivative()
        return (
            w2 * w - w1 * w1 + self.a * w1 * w + self.b * w * w
            - self.alpha * w - self.beta * w1 - self.gamma
        )


def normalize_hayman(tau1, tau2, kappa0, kappa1, kappa2, kappa3) -> Coefficients:
    """Coefficients of the normal form obtained from
    ff'' - f'^2 + tau1 ff' + tau2 f^2 = kappa0 + kappa1 f + kappa2 f' + kappa3 f''
    by substituting w = f - kappa3.
    """
    t1, t2, k0, k1, k2, k3 = (RatFunc._coerce(x) for x in (tau1, tau2, kappa0, kappa1, kappa2, kappa3))
    k3p = k3.derivative()
    k3pp = k3p.derivative()
    alpha = k1 - 2 * t2 * k3 - t1 * k3p - k3pp
    beta = k2 - t1 * k3 + 2 * k3p
    gamma = (
        k0 + k1 * k3 + k2 * k3p + k3 * k3pp - t2 * k3 * k3
        - t1 * k3 * k3p + k3p * k3p - k3 * k3pp
    )
    return Coefficients(t1, t2, alpha, beta, gamma)


# ---------------------------------------------------------------------------
# derived quantities


@dataclass(frozen=True)
class DerivedData:
    A: Optional[RatFunc]
    B: RatFunc
    intermediates: dict = field(default_factory=dict, compare=False)
    flags: tuple[str, ...] = ()


def derived_AB(c: Coefficients) -> DerivedData:
    a, b, al, be, ga = c.as_tuple()
    bep = be.derivative()
    B = 2 * al + bep + a * be
    inter = {"delta2": (al + bep + a * be) / 2}
    if ga.is_zero():
        return DerivedData(None, B, inter, ("A unavailable: gamma == 0",))
    gap = ga.derivative()
    A = (be * (al + bep) - gap - a * (2 * ga - be * be)) / ga
    inter["delta1"] = (gap + a * (ga - be * be) - be * (al + bep)) / (2 * ga)
    inter["A'+aA-2b"] = A.derivative() + a * A - 2 * b
    inter["K"] = be * A / 2 - B  # (beta/2) A - B
    inter["Q"] = be * be / 4 - ga  # beta^2/4 - gamma
    return DerivedData(A, B, inter)


@dataclass(frozen=True)
class LocalExpansion:
    p: int
    a0: tuple[Fraction, ...]
    irrational_pair: bool
    a1: dict
    note: str = ""


def local_expansion_data(c: Coefficients, z0) -> LocalExpansion:
    """Leading data of w = a0 (z-z0)^p + a1 (z-z0)^(p+1) + ... at a zero of w."""
    z0 = Fraction(z0)
    for f in c.as_tuple():
        if f and (f.denom(z0) == 0 or f.numer(z0) == 0):
            raise ValueError(f"z0 = {z0} is a zero or pole of a coefficient")
    a, b, al, be, ga = c.as_tuple()
    if be.is_zero() and ga.is_zero():
        if al.is_zero():
            return LocalExpansion(2, (), False, {}, "no zeros off the coefficient singularities")
        a0 = -al(z0) / 2
        return LocalExpansion(2, (a0,), False, {}, "double zero, a0 = -alpha(z0)/2")
    bz, gz = be(z0), ga(z0)
    quad = Poly((gz, bz, 1))
    roots = tuple(r for r, _ in rational_roots(quad)) if gz != 0 else ()
    if ga.is_zero():
        # a0 = -beta(z0); the a1 equation is resonant
        return LocalExpansion(
            1, (-bz,), False, {},
            "resonant: a1 free, zero requires (alpha+beta'+a*beta)(z0) = 0",
        )
    d = derived_AB(c).intermediates
    d1, d2 = d["delta1"](z0), d["delta2"](z0)
    a1 = {r: d1 * r - d2 for r in roots}
    return LocalExpansion(1, roots, not roots, a1)


# ---------------------------------------------------------------------------
# consistency of a first-order linear reduction


class Consistency(enum.Enum):
    CONSISTENT = "Consistent"
    FORCED_RATIONAL = "ForcedRational"
    INCONSISTENT = "Inconsistent"


@dataclass(frozen=True)
class ConsistencyReport:
    status: Consistency
    C2: RatFunc
    C1: RatFunc
    C0: RatFunc
    candidates: tuple[RatFunc, ...] = ()
    note: str = ""

    @property
    def consistent(self) -> bool:
        return self.status is Consistency.CONSISTENT


def _quadratic_roots(C2: RatFunc, C1: RatFunc, C0: RatFunc) -> Optional[tuple[RatFunc, ...]]:
    if C2.is_zero():
        if C1.is_zero():
            return None
        return (-C0 / C1,)
    s = is_square(C1 * C1 - 4 * C2 * C0)
    if s is None:
        return None
    roots = {(-C1 + s) / (2 * C2), (-C1 - s) / (2 * C2)}
    return tuple(sorted(roots, key=str))


def consistency_reduce(p: RatFunc, q: RatFunc, c: Coefficients) -> ConsistencyReport:
    """Substitute w' = p w + q into the equation and collect C2 w^2 + C1 w + C0."""
    a, b, al, be, ga = c.as_tuple()
    C2 = p.derivative() + a * p + b
    C1 = q.derivative() - p * q + a * q - al - be * p
    C0 = -q * q - be * q - ga
    if C2.is_zero() and C1.is_zero() and C0.is_zero():
        return ConsistencyReport(Consistency.CONSISTENT, C2, C1, C0)
    roots = _quadratic_roots(C2, C1, C0)
    if roots:
        return ConsistencyReport(Consistency.FORCED_RATIONAL, C2, C1, C0, roots)
    return ConsistencyReport(Consistency.INCONSISTENT, C2, C1, C0)


def _consistency_quadratic_ext(p, q0, q1, ksq, c: Coefficients) -> ConsistencyReport:
    """Same check for q = q0 + k q1 with k^2 = ksq not a rational square."""
    a, b, al, be, ga = c.as_tuple()
    C2 = p.derivative() + a * p + b
    C1r = q0.derivative() - p * q0 + a * q0 - al - be * p
    C1k = q1.derivative() - p * q1 + a * q1
    C0r = -(q0 * q0 + q1 * q1 * ksq) - be * q0 - ga
    C0k = -2 * q0 * q1 - be * q1
    ok = not any((C2, C1r, C1k, C0r, C0k))
    note = f"checked over Q(sqrt({ksq}))"
    if ok:
        return ConsistencyReport(Consistency.CONSISTENT, C2, C1r, C0r, note=note)
    return ConsistencyReport(Consistency.INCONSISTENT, C2, C1r, C0r, note=note)


# ---------------------------------------------------------------------------
# branches


@dataclass(frozen=True, kw_only=True)
class Branch:
    label = "Branch"
    order_key = 99
    identities: tuple[str, ...] = ()
    flags: tuple[str, ...] = ()
    consistency: tuple[ConsistencyReport, ...] = ()

    def reduction(self) -> Optional[tuple[RatFunc, RatFunc]]:
        """(p, q) with w' = p w + q when the branch is a rational linear reduction."""
        return None

    def data(self) -> dict:
        return {}


@dataclass(frozen=True, kw_only=True)
class HomogeneousSpecial(Branch):
    label = "HomogeneousSpecial"
    order_key = 0
    a: RatFunc
    b: RatFunc

    def data(self):
        return {"reduced_ode": f"(w'/w)' + ({self.a})*(w'/w) + ({self.b}) = 0"}


@dataclass(frozen=True, kw_only=True)
class Case1(Branch):
    label = "Case1"
    order_key = 1
    alpha: RatFunc

    def data(self):
        return {"alpha": self.alpha, "form": f"c1^-2*(cosh(c1*z + c2) + 1)*({self.alpha})"}


@dataclass(frozen=True, kw_only=True)
class Case2(Branch):
    label = "Case2"
    order_key = 2
    h: RatFunc

    def reduction(self):
        return (-self.h, ZERO)

    def data(self):
        return {"h": self.h, "reduced_ode": "w' + h*w = 0"}


@dataclass(frozen=True, kw_only=True)
class Case3(Branch):
    label = "Case3"
    order_key = 3
    beta: RatFunc
    h_search: Optional[LinearODESolutions] = None

    @property
    def h_rational(self) -> Optional[RatFunc]:
        if self.h_search is not None and self.h_search.found:
            return self.h_search.particular
        return None

    def data(self):
        out = {"reduced_system": "w' = h*w - beta, h' = -a*h - b"}
        s = self.h_search
        if s is not None:
            out["h_particular"] = s.particular
            out["h_homogeneous"] = s.homogeneous
            out["h_search_complete"] = s.complete
        return out


@dataclass(frozen=True, kw_only=True)
class Case4(Branch):
    label = "Case4"
    order_key = 4
    h1: RatFunc
    h2: RatFunc
    g: RatFunc

    def reduction(self):
        return (self.h1, self.h2)

    def data(self):
        return {"h1": self.h1, "h2": self.h2, "g": self.g, "reduced_ode": "w' = h1*w + h2"}


@dataclass(frozen=True, kw_only=True)
class Case5a_Rational(Branch):
    """Cosh form. ``k1sq`` None means k1 is a free nonzero constant; then
    k2^2 = k2sq_coeffs[0]/k1^2 + k2sq_coeffs[1]/k1^4."""

    label = "Case5a_Rational"
    order_key = 5
    k1sq: Optional[Fraction]
    k2sq: Optional[Fraction]
    k2sq_coeffs: tuple[Fraction, Fraction] = (Fraction(0), Fraction(0))
    R: RatFunc
    S: RatFunc
    A: RatFunc
    K: RatFunc

    def k2sq_for(self, k1sq) -> Fraction:
        if self.k1sq is not None:
            return self.k2sq
        x = 1 / Fraction(k1sq)
        return self.k2sq_coeffs[0] * x + self.k2sq_coeffs[1] * x * x

    def g(self, k1sq=1) -> RatFunc:
        return Fraction(k1sq if self.k1sq is None else self.k1sq) / self.R - self.A * self.A / 4

    def data(self):
        if self.k1sq is None:
            k2 = f"{self.k2sq_coeffs[0]}/k1^2 + {self.k2sq_coeffs[1]}/k1^4"
        else:
            k2 = self.k2sq
        return {
            "k1sq": "free" if self.k1sq is None else self.k1sq,
            "k2sq": k2,
            "R": self.R,
            "S": self.S,
            "form": "w = ±k2*cosh(c1 - k1*int(e^{-int a})) e^{-int A/2} - K e^{2 int a}/(2 k1^2)",
        }


@dataclass(frozen=True, kw_only=True)
class Case5a_Transcendental(Branch):
    label = "Case5a_Transcendental"
    order_key = 6
    u1: RatFunc
    v1: Poly

    def data(self):
        return {"e^{2 int a}": f"({self.u1})*exp({self.v1})", "conditions": "alpha = beta = 0"}


@dataclass(frozen=True, kw_only=True)
class Case5b(Branch):
    label = "Case5b"
    order_key = 7
    k1sq: Fraction
    R: RatFunc
    A: RatFunc
    K: RatFunc
    r: Optional[RatFunc] = None  # e^{int a} when rational

    def data(self):
        return {
            "k1sq": self.k1sq, "R": self.R, "e^{int a}": self.r,
            "form": "w = exp(int(-A/2 + k1 e^{-int a})) - K e^{2 int a}/(2 k1^2)",
        }


@dataclass(frozen=True, kw_only=True)
class Case5c(Branch):
    label = "Case5c"
    order_key = 8
    k1: Fraction
    K: RatFunc
    Q: RatFunc
    a: RatFunc

    def data(self):
        return {"k1": self.k1, "K": self.K, "form": "w = K*H^2/4 + Q/K, H' = a*H + k1"}


@dataclass(frozen=True, kw_only=True)
class Case5d(Branch):
    label = "Case5d"
    order_key = 9
    k1sq: Fraction
    p: RatFunc  # -A/2
    beta: RatFunc
    U: RatFunc  # e^{-int(A/2 + a)}

    def reduction(self):
        k1 = rational_sqrt(self.k1sq)
        if k1 is None:
            return None
        return (self.p, -self.beta / 2 + self.U * k1)

    def data(self):
        return {"k1sq": self.k1sq, "U": self.U, "reduced_ode": "w' + (A*w + beta)/2 = k1*U"}


@dataclass(frozen=True, kw_only=True)
class Case5e(Branch):
    label = "Case5e"
    order_key = 10
    p: RatFunc
    q: RatFunc

    def reduction(self):
        return (self.p, self.q)

    def data(self):
        return {"reduced_ode": "w' + (A*w + beta)/2 = 0"}


@dataclass(frozen=True, kw_only=True)
class NoBranch(Branch):
    label = "NoBranch"
    order_key = 100

    def data(self):
        return {"conclusion": "no transcendental meromorphic solution"}


@dataclass(frozen=True)
class Classification:
    branches: tuple[Branch, ...]
    derived: DerivedData
    warnings: tuple[str, ...] = ()

    @property
    def primary(self) -> Branch:
        return self.branches[0]

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(b.label for b in self.branches)

    def find(self, label: str) -> Optional[Branch]:
        return next((b for b in self.branches if b.label == label), None)

    @property
    def incomplete(self) -> bool:
        return any("incomplete" in f for b in self.branches for f in b.flags)


# ---------------------------------------------------------------------------
# case 4 and case 5


def case4_solve(c: Coefficients, d: DerivedData) -> tuple[list[tuple[RatFunc, RatFunc]], list[str]]:
    """Pairs (h1, h2) satisfying the three defining identities."""
    a, b, al, be, ga = c.as_tuple()
    notes: list[str] = []
    s = is_square(be * be - 4 * ga)
    if s is None:
        return [], ["quadratic extension required: beta^2 - 4 gamma is not a square"]
    pairs = []
    for h2 in dict.fromkeys(((-be + s) / 2, (-be - s) / 2)):
        if (h2 + be).is_zero():
            notes.append("candidate with h2 + beta == 0 excluded")
            continue
        h1 = (h2.derivative() + a * h2 - al) / (h2 + be)
        if (h1.derivative() + a * h1 + b).is_zero():
            pairs.append((h1, h2))
        else:
            notes.append(f"h2 = {h2}: h1' + a h1 + b != 0")
    return pairs, notes


def _log_derivative_constant(F: RatFunc, G: RatFunc) -> bool:
    """Whether F * e^{int G} is constant, for F != 0: F'/F + G == 0."""
    return (F.derivative() / F + G).is_zero()


def case5_dispatch(c: Coefficients, d: DerivedData) -> list[Branch]:
    a, b, al, be, ga = c.as_tuple()
    A, B = d.A, d.B
    K = d.intermediates["K"]
    Q = d.intermediates["Q"]
    found: list[Branch] = []

    # (e)
    if Q.is_zero():
        found.append(Case5e(p=-A / 2, q=-be / 2, identities=("beta^2/4 - gamma == 0",)))

    # (c)
    if K and _log_derivative_constant(K, A / 2 + 2 * a):
        e = exp_integral_form(A / 2 + 2 * a)
        if isinstance(e, RationalU):
            k1 = constant_value(K * e.u)
            if k1:
                found.append(Case5c(
                    k1=k1, K=K, Q=Q, a=a,
                    identities=("K'/K + A/2 + 2a == 0",),
                ))

    # (d)
    if Q and _log_derivative_constant(Q, A + 2 * a):
        e_half = exp_integral_form(A / 2 + a)
        if isinstance(e_half, RationalU):
            S_d = e_half.u * e_half.u
            k1sq = constant_value(Q * S_d)
            if k1sq:
                flags = []
                if (a.derivative() + a * a + b).is_zero() and (A + 2 * a).is_zero():
                    flags.append("special: w' - (2 a w - beta)/2 = k1")
                found.append(Case5d(
                    k1sq=k1sq, p=-A / 2, beta=be, U=e_half.u.inverse(),
                    identities=("Q'/Q + A + 2a == 0", "e^{int(A/2 + a)} rational"),
                    flags=tuple(flags),
                ))

    # (a) / (b)
    e2a = exp_integral_form(2 * a)
    if isinstance(e2a, RationalU):
        found.extend(_case5ab(c, A, B, K, Q, e2a.u))
    elif isinstance(e2a, MeromorphicUeV):
        gl = ga.derivative() / ga
        ident = 2 * (a.derivative() + a * a + b) + gl.derivative() + a * gl
        if al.is_zero() and be.is_zero() and ident.is_zero():
            found.append(Case5a_Transcendental(
                u1=e2a.u, v1=e2a.v,
                identities=("alpha == beta == 0", "2(a'+a^2+b) + (g'/g)' + a g'/g == 0"),
            ))
    return found


def _case5ab(c: Coefficients, A, B, K, Q, R: RatFunc) -> list[Branch]:
    a, b, al, be, ga = c.as_tuple()
    eS = exp_integral_form(A + 2 * a)
    if not isinstance(eS, RationalU):
        return []
    S = eS.u
    out: list[Branch] = []
    base = B.derivative() + 2 * a * B + A * al
    ident = ("B' + 2aB + A alpha + beta(k1^2/R - A^2/4 - b) == 0", "e^{int(A+2a)} rational")

    if be.is_zero():
        if base:
            return []
        # k2^2 = x*(-Q S) + x^2 * (K^2 R S / 4), x = 1/k1^2
        c1 = -Q * S
        c2 = K * K * R * S / 4
        sols = solve_scalar_for_constancy(c1, c2)
        if sols.free:
            c1v, c2v = constant_value(c1), constant_value(c2)
            out.append(Case5a_Rational(
                k1sq=None, k2sq=None, k2sq_coeffs=(c1v, c2v), R=R, S=S, A=A, K=K,
                identities=ident + ("k1 free",),
            ))
            if c2v and c1v:
                out.extend(_case5b(c, A, K, R, -c2v / c1v, ident))
            return out
        k1sq_values = [1 / x for x in sols.values if x]
    else:
        P = base - be * (A * A / 4 + b)
        Qc = be / R
        sols = solve_scalar_for_constancy(P, Qc)
        if sols.free:
            qv = constant_value(Qc)
            k1sq_values = [-constant_value(P) / qv] if qv else []
        else:
            k1sq_values = list(sols.values)
        k1sq_values = [v for v in k1sq_values if v and (P + Qc * v).is_zero()]

    for k1sq in k1sq_values:
        T = (K * K * R / (4 * k1sq) - Q) * S / k1sq
        k2sq = constant_value(T)
        if k2sq is None:
            continue
        if k2sq != 0:
            out.append(Case5a_Rational(
                k1sq=k1sq, k2sq=k2sq, R=R, S=S, A=A, K=K, identities=ident + ("k2^2 constant",),
            ))
        else:
            out.extend(_case5b(c, A, K, R, k1sq, ident))
    return out


def _case5b(c, A, K, R, k1sq, ident) -> list[Branch]:
    ea = exp_integral_form(c.a)
    if isinstance(ea, RationalU):
        return [Case5b(k1sq=k1sq, R=R, A=A, K=K, r=ea.u, identities=ident + ("k2 == 0",))]
    return [Case5b(
        k1sq=k1sq, R=R, A=A, K=K, r=None, identities=ident + ("k2 == 0",),
        flags=(f"e^{{int a}} not rational ({ea.kind}): closed form unavailable",),
    )]


# ---------------------------------------------------------------------------
# driver


def _linear_flags(p: RatFunc) -> tuple[str, ...]:
    if isinstance(exp_integral_form(p), RationalU):
        return ("vacuous: e^{int p} rational, every meromorphic solution of the reduction is rational",)
    return ()


def _with_checks(br: Branch, c: Coefficients) -> Branch:
    """Attach consistency reports and vacuity warnings to linear reductions."""
    reports: list[ConsistencyReport] = []
    flags = list(br.flags)
    red = br.reduction()
    if red is not None:
        reports.append(consistency_reduce(red[0], red[1], c))
        flags.extend(_linear_flags(red[0]))
    elif isinstance(br, Case5d):
        reports.append(_consistency_quadratic_ext(br.p, -br.beta / 2, br.U, br.k1sq, c))
        flags.extend(_linear_flags(br.p))
    elif isinstance(br, Case3) and br.h_search is not None:
        # only the rational members of the h family; transcendental h stays open
        for h in br.h_search.members():
            reports.append(consistency_reduce(h, -br.beta, c))
    for rep in reports:
        if not rep.consistent:
            flags.append(f"reduction {rep.status.value} with the equation")
    if isinstance(br, Case5a_Rational):
        ea = exp_integral_form(c.a)
        if not isinstance(ea, RationalU):
            flags.append(f"e^{{int a}} is {ea.kind}")
    return replace(br, consistency=tuple(reports), flags=tuple(dict.fromkeys(flags)))


def classify(c: Coefficients) -> Classification:
    a, b, al, be, ga = c.as_tuple()
    d = derived_AB(c)
    found: list[Branch] = []
    warnings: list[str] = []

    if not al and not be and not ga:
        found.append(HomogeneousSpecial(a=a, b=b, identities=("alpha == beta == gamma == 0",)))

    if not be and not ga and al and not a:
        if ((al.derivative() / al).derivative() + b).is_zero():
            found.append(Case1(alpha=al, identities=("(alpha'/alpha)' + b == 0",)))

    if not ga and be:
        h = -al / be
        if (h.derivative() + a * h + b).is_zero():
            found.append(Case2(h=h, identities=("h' + a h + b == 0",)))

    if not ga and (al + be.derivative() + a * be).is_zero():
        search = rational_solutions_linear_ode(-a, -b)
        flags = () if search.complete else ("incomplete rational search for h",)
        found.append(Case3(beta=be, h_search=search, identities=("alpha + beta' + a beta == 0",), flags=flags))

    if ga:
        disc = d.intermediates["A'+aA-2b"]
        if disc:
            pairs, notes = case4_solve(c, d)
            warnings.extend(f"case4: {n}" for n in notes)
            for h1, h2 in pairs:
                g = h1 * h1 + d.A * h1
                flags = ()
                if (g + d.A * d.A / 4).is_zero():
                    flags = ("g + A^2/4 == 0: no transcendental solution",)
                found.append(Case4(
                    h1=h1, h2=h2, g=g, flags=flags,
                    identities=("h1' + a h1 + b == 0", "h2^2 + beta h2 + gamma == 0",
                                "h2' == (h1 - a) h2 + alpha + beta h1"),
                ))
        else:
            found.extend(case5_dispatch(c, d))

    found = [_with_checks(br, c) for br in found]
    found.sort(key=lambda br: br.order_key)
    if not found:
        found = [NoBranch(flags=("caveat: the listed forms exhaust all transcendental meromorphic solutions",))]
    return Classification(tuple(found), d, tuple(warnings))
