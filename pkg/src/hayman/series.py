"""Numeric checks: Taylor integration, closed-form residuals, central index.

Closed forms are evaluated on second-order jets so that ``w'`` and ``w''`` come
out analytically rather than by finite differences.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import mpmath
import numpy as np

from .algebra import EPS_POLE, POLE, Poly, RatFunc, poly_gcd
from .classifier import Case1, Case5a_Rational, Case5b, Coefficients
from .toolkit import RationalU, exp_integral_form, is_square, rational_solutions_linear_ode

DEFAULT_N = 128
DEFAULT_TOL = 1e-9
RELIABLE_FRACTION = 0.8


class TruncationError(ValueError):
    """The maximal term sits too close to the truncation order."""


# ---------------------------------------------------------------------------
# jets


def _is_mp(x) -> bool:
    return isinstance(x, (mpmath.mpf, mpmath.mpc))


def _lib(x):
    return mpmath if _is_mp(x) else cmath


def _num(x, like):
    """x as a number of the same kind as ``like`` (mpmath or complex double)."""
    if _is_mp(like):
        if isinstance(x, Fraction):
            return mpmath.mpf(x.numerator) / x.denominator
        return mpmath.mpmathify(x)
    return complex(x)


class Jet:
    """Value with first and second derivative: f, f', f''.

    Components are complex doubles or mpmath numbers; mixing follows the
    usual promotion rules.
    """

    __slots__ = ("v", "d1", "d2")

    def __init__(self, v, d1=0, d2=0):
        self.v, self.d1, self.d2 = v, d1, d2

    @staticmethod
    def _c(x) -> "Jet":
        return x if isinstance(x, Jet) else Jet(x)

    def __add__(self, o):
        o = Jet._c(o)
        return Jet(self.v + o.v, self.d1 + o.d1, self.d2 + o.d2)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.v, -self.d1, -self.d2)

    def __sub__(self, o):
        return self + (-Jet._c(o))

    def __rsub__(self, o):
        return Jet._c(o) - self

    def __mul__(self, o):
        o = Jet._c(o)
        return Jet(
            self.v * o.v,
            self.d1 * o.v + self.v * o.d1,
            self.d2 * o.v + 2 * self.d1 * o.d1 + self.v * o.d2,
        )

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = Jet._c(o)
        h = self.v / o.v
        h1 = (self.d1 - h * o.d1) / o.v
        h2 = (self.d2 - 2 * h1 * o.d1 - h * o.d2) / o.v
        return Jet(h, h1, h2)

    def __rtruediv__(self, o):
        return Jet._c(o) / self

    def apply(self, f0, f1, f2) -> "Jet":
        """Chain rule for a scalar function with value/derivatives f0, f1, f2 at self.v."""
        return Jet(f0, f1 * self.d1, f2 * self.d1 * self.d1 + f1 * self.d2)

    def __repr__(self):
        return f"Jet({self.v}, {self.d1}, {self.d2})"


def jvar(z) -> Jet:
    return Jet(z, 1, 0)


def jcosh(x: Jet) -> Jet:
    m = _lib(x.v)
    c, s = m.cosh(x.v), m.sinh(x.v)
    return x.apply(c, s, c)


def jsinh(x: Jet) -> Jet:
    m = _lib(x.v)
    c, s = m.cosh(x.v), m.sinh(x.v)
    return x.apply(s, c, s)


def jexp(x: Jet) -> Jet:
    e = _lib(x.v).exp(x.v)
    return x.apply(e, e, e)


def jsqrt(x: Jet) -> Jet:
    r = _lib(x.v).sqrt(x.v)
    return x.apply(r, 0.5 / r, -0.25 / (r * x.v))


def jrat(f: RatFunc, z: Jet) -> Jet:
    def horner(p: Poly) -> Jet:
        acc = Jet(_num(0, z.v))
        for c in reversed(p.coeffs):
            acc = acc * z + _num(c, z.v)
        return acc

    return horner(f.numer) / horner(f.denom)


def _sqrt_of(x, like):
    return _lib(like).sqrt(_num(x, like))


# ---------------------------------------------------------------------------
# closed-form instances


@dataclass(frozen=True)
class SolutionFormInstance:
    label: str
    fn: Callable[[Jet], Jet]
    constants: dict = field(default_factory=dict)

    def evaluate(self, z, digits: Optional[int] = None) -> tuple:
        """(w, w', w'') at z; with ``digits`` the result is computed in mpmath."""
        if digits is None:
            j = self.fn(jvar(complex(z)))
            return complex(j.v), complex(j.d1), complex(j.d2)
        with mpmath.workdps(digits):
            zz = _num(Fraction(z) if isinstance(z, int) else z, mpmath.mpf(0))
            j = self.fn(jvar(zz))
            return +j.v, +j.d1, +j.d2

    def __call__(self, z: complex) -> complex:
        return complex(self.fn(jvar(complex(z))).v)


def case1_form(alpha: RatFunc, c1=1, c2=0) -> SolutionFormInstance:
    def fn(z: Jet) -> Jet:
        k, s = _num(c1, z.v), _num(c2, z.v)
        return (jcosh(z * k + s) + 1) * jrat(alpha, z) / (k * k)

    return SolutionFormInstance("Case1", fn, {"c1": c1, "c2": c2})


def cosh_form(
    br: Case5a_Rational, c: Coefficients, c1=0, k1=1, sign: int = 1
) -> Optional[SolutionFormInstance]:
    """w = sign*k2*cosh(c1 - k1*G) * phi - K R/(2 k1^2) with G' = e^{-int a}, phi = e^{-int A/2}.

    Returns None when the integral of e^{-int a} is not of the form
    e^{-int a} * (rational), or when the square-root branches cannot be
    paired consistently. Constants may be mpmath numbers for high-precision
    evaluation.
    """
    a = c.a
    ys = rational_solutions_linear_ode(a, RatFunc.const(1))
    if not ys.found:
        return None
    y = ys.particular
    e_rho = exp_integral_form(-a)
    rho_rat = e_rho.u if isinstance(e_rho, RationalU) else None
    e_phi = exp_integral_form(-br.A / 2)
    phi_rat = e_phi.u if isinstance(e_phi, RationalU) else None
    q = None
    if phi_rat is None:
        q = is_square(br.S.inverse())
        if q is None:
            return None
    Rinv = br.R.inverse()
    shift = -br.K * br.R

    def constants(like):
        if br.k1sq is not None:
            kk = _sqrt_of(br.k1sq, like)
            return kk, kk * kk, _sqrt_of(br.k2sq, like)
        kk = _num(k1, like)
        ksq = kk * kk
        k2sq = _num(br.k2sq_coeffs[0], like) / ksq + _num(br.k2sq_coeffs[1], like) / (ksq * ksq)
        return kk, ksq, _lib(like).sqrt(k2sq)

    def fn(z: Jet) -> Jet:
        kk, ksq, k2 = constants(z.v)
        rho = jrat(rho_rat, z) if rho_rat is not None else jsqrt(jrat(Rinv, z))
        phi = jrat(phi_rat, z) if phi_rat is not None else jrat(q, z) / rho
        G = rho * jrat(y, z)
        return sign * k2 * jcosh(_num(c1, z.v) - kk * G) * phi + jrat(shift, z) / (2 * ksq)

    kk, _, k2 = constants(0j)
    return SolutionFormInstance("Case5a_Rational", fn, {"c1": c1, "k1": kk, "k2": k2, "sign": sign})


def case5b_form(br: Case5b, c: Coefficients, scale=1) -> Optional[SolutionFormInstance]:
    """w = scale * e^{-int A/2} * exp(k1 T) - K R/(2 k1^2) with T' = e^{-int a}."""
    if br.r is None:
        return None
    e_phi = exp_integral_form(-br.A / 2)
    if not isinstance(e_phi, RationalU):
        return None
    ts = rational_solutions_linear_ode(RatFunc(), br.r.inverse())
    if not ts.found:
        return None
    T = ts.particular
    shift = -br.K * br.R / (2 * br.k1sq)
    phi = e_phi.u

    def fn(z: Jet) -> Jet:
        k1 = _sqrt_of(br.k1sq, z.v)
        return _num(scale, z.v) * jrat(phi, z) * jexp(k1 * jrat(T, z)) + jrat(shift, z)

    return SolutionFormInstance("Case5b", fn, {"k1": cmath.sqrt(float(br.k1sq)), "scale": scale})


def closed_form_instance(branch, c: Coefficients, c1=None, c2=0, k1=1, sign=1):
    """Instantiate a branch's closed form with the given constants, if it has one."""
    if isinstance(branch, Case1):
        return case1_form(branch.alpha, 1 if c1 is None else c1, c2)
    if isinstance(branch, Case5a_Rational):
        return cosh_form(branch, c, 0 if c1 is None else c1, k1, sign)
    if isinstance(branch, Case5b):
        return case5b_form(branch, c)
    return None


# ---------------------------------------------------------------------------
# residuals


def annulus_grid(center: complex = 0, r_in: float = 0.5, r_out: float = 2.0, n: int = 100) -> list[complex]:
    nr = max(1, int(round(math.sqrt(n))))
    na = max(1, n // nr)
    radii = np.linspace(r_in, r_out, nr)
    out = []
    for r in radii:
        for k in range(na):
            th = 2 * math.pi * (k + 0.5) / na
            out.append(complex(center) + r * cmath.exp(1j * th))
    return out


def residual_check(
    c: Coefficients,
    form: SolutionFormInstance,
    grid: Optional[Sequence[complex]] = None,
    eps: float = EPS_POLE,
) -> float:
    """max |w''w - w'^2 + a w'w + b w^2 - alpha w - beta w' - gamma| / (1 + |w|^2)."""
    pts = annulus_grid() if grid is None else grid
    worst = None
    for z in pts:
        vals = [f.eval_complex(z, eps) for f in c.as_tuple()]
        if any(v is POLE for v in vals):
            continue
        a, b, al, be, ga = vals
        w, w1, w2 = form.evaluate(z)
        if abs(w) < eps:
            continue
        res = w2 * w - w1 * w1 + a * w1 * w + b * w * w - al * w - be * w1 - ga
        r = abs(res) / (1 + abs(w) ** 2)
        worst = r if worst is None else max(worst, r)
    if worst is None:
        raise ValueError("every grid point was excluded")
    return worst


# ---------------------------------------------------------------------------
# Taylor integration


@dataclass(frozen=True)
class ComplexSeries:
    base_point: complex
    coefficients: np.ndarray

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, z: complex) -> complex:
        t = z - self.base_point
        acc = 0j
        for c in self.coefficients[::-1]:
            acc = acc * t + c
        return complex(acc)


def _lcm(p: Poly, q: Poly) -> Poly:
    return (p * q).exquo(poly_gcd(p, q)).monic()


def cleared_polys(c: Coefficients) -> tuple[Poly, ...]:
    """(L, L a, L b, L alpha, L beta, L gamma) with L the lcm of the denominators."""
    L = Poly.const(1)
    for f in c.as_tuple():
        L = _lcm(L, f.denom)
    out = [L]
    for f in c.as_tuple():
        out.append(f.numer * L.exquo(f.denom))
    return tuple(out)


def _as_rational(z0) -> Optional[Fraction]:
    if isinstance(z0, (int, Fraction)):
        return Fraction(z0)
    z = complex(z0)
    if z.imag == 0:
        return Fraction(z.real)
    return None


def default_digits(N: int) -> int:
    """Working precision for the recurrence.

    Rounding noise behaves like a forcing term whose response is singular at
    the zeros of w and at the coefficient poles, so relative to the true
    coefficients it grows like (r/d)^n with d the distance to the nearest such
    point. N + 20 digits keeps the maximal term clean for r up to about 10 d.
    """
    return N + 20


def _taylor_poly(p: Poly, z0, n: int, ctx) -> list:
    """Coefficients of p(z0 + t) as context numbers, padded to length n + 1."""
    zr = _as_rational(z0)
    if zr is not None:
        sh = [ctx.mpf(x.numerator) / x.denominator for x in p.shift(zr).coeffs]
    else:
        sh = [ctx.mpc(0)] * len(p.coeffs)
        zc = ctx.mpc(complex(z0))
        for c in reversed(p.coeffs):
            for i in range(len(sh) - 1, 0, -1):
                sh[i] = sh[i] * zc + sh[i - 1]
            sh[0] = sh[0] * zc + ctx.mpf(c.numerator) / c.denominator
    out = [ctx.mpf(0)] * (n + 1)
    m = min(len(sh), n + 1)
    out[:m] = sh[:m]
    return out


def taylor_solve(
    c: Coefficients, z0, w0: complex, w1: complex, N: int = DEFAULT_N, digits: Optional[int] = None
) -> ComplexSeries:
    """Power series of the solution with w(z0) = w0, w'(z0) = w1, to order N.

    The equation is first multiplied by the lcm L of the coefficient
    denominators so every coefficient is a polynomial; at order n the only
    unknown, c_{n+2}, enters as L(z0) c0 (n+2)(n+1) c_{n+2}. The recurrence
    runs at ``digits`` decimal digits and the result is rounded to doubles.
    """
    if N < 2:
        raise ValueError("N must be at least 2")
    if w0 == 0:
        raise ValueError("w0 = 0: the initial value problem is singular")
    cleared = cleared_polys(c)
    zr = _as_rational(z0)
    if zr is not None:
        if cleared[0](zr) == 0:
            raise ValueError(f"a coefficient has a pole at z0 = {z0}")
    elif abs(cleared[0].eval_complex(complex(z0))) < EPS_POLE:
        raise ValueError(f"a coefficient has a pole at z0 = {z0}")

    ctx = mpmath.mp.clone()
    ctx.dps = default_digits(N) if digits is None else digits
    fdot = ctx.fdot
    L, La, Lb, Lal, Lbe, Lga = (_taylor_poly(p, z0, N, ctx) for p in cleared)
    Lnz = [j for j in range(1, N + 1) if L[j] != 0]

    def num(x):
        if isinstance(x, Fraction):
            return ctx.mpf(x.numerator) / x.denominator
        if _is_mp(x):
            return ctx.convert(x)
        x = complex(x)
        return ctx.mpf(x.real) if x.imag == 0 else ctx.mpc(x)

    cs = [ctx.mpf(0)] * (N + 1)
    d1 = [ctx.mpf(0)] * (N + 1)  # (k+1) c_{k+1}
    d2 = [ctx.mpf(0)] * (N + 1)  # (k+2)(k+1) c_{k+2}
    W2 = [ctx.mpf(0)] * (N + 1)  # w''w - w'^2
    WW1 = [ctx.mpf(0)] * (N + 1)  # w'w
    WW = [ctx.mpf(0)] * (N + 1)  # w^2
    cs[0], cs[1] = num(w0), num(w1)
    lead = L[0] * cs[0]

    for n in range(N - 1):
        d1[n] = (n + 1) * cs[n + 1]
        rc = cs[n::-1]
        WW1[n] = fdot(d1[: n + 1], rc)
        WW[n] = fdot(cs[: n + 1], rc)
        known = fdot(d2[:n], cs[n:0:-1]) - fdot(d1[: n + 1], d1[n::-1])
        rest = (
            L[0] * known
            + fdot([L[j] for j in Lnz if j <= n], [W2[n - j] for j in Lnz if j <= n])
            + fdot(La[: n + 1], WW1[n::-1])
            + fdot(Lb[: n + 1], WW[n::-1])
            - fdot(Lal[: n + 1], rc)
            - fdot(Lbe[: n + 1], d1[n::-1])
            - Lga[n]
        )
        cnext = -rest / (lead * (n + 2) * (n + 1))
        cs[n + 2] = cnext
        d2[n] = (n + 2) * (n + 1) * cnext
        W2[n] = known + d2[n] * cs[0]
    return ComplexSeries(complex(z0), np.array([complex(x) for x in cs], dtype=complex))


def equation_residual_series(c: Coefficients, s: ComplexSeries) -> tuple[np.ndarray, np.ndarray]:
    """Coefficients of L*(lhs - rhs) for the series, and a termwise magnitude scale."""
    N = s.order
    cs = s.coefficients
    k = np.arange(N + 1)
    w1 = np.zeros(N + 1, dtype=complex)
    w2 = np.zeros(N + 1, dtype=complex)
    w1[:N] = k[1:] * cs[1:]
    w2[: N - 1] = k[2:] * (k[2:] - 1) * cs[2:]
    L, La, Lb, Lal, Lbe, Lga = (
        np.array([complex(x) for x in _taylor_poly(p, s.base_point, N, mpmath.mp)], dtype=complex)
        for p in cleared_polys(c)
    )

    def mul(x, y):
        return np.convolve(x, y)[: N + 1]

    terms = [
        mul(L, mul(w2, cs)), -mul(L, mul(w1, w1)), mul(La, mul(w1, cs)), mul(Lb, mul(cs, cs)),
        -mul(Lal, cs), -mul(Lbe, w1), -Lga,
    ]
    total = sum(terms)
    scale = sum(np.abs(t) for t in terms)
    return total[: N - 1], scale[: N - 1]


def pole_cleared(c: Coefficients, omega: Poly) -> Coefficients:
    """Coefficients of the equation satisfied by W = omega * w."""
    om = RatFunc(omega)
    ol = om.derivative() / om
    a, b, al, be, ga = c.as_tuple()
    return Coefficients(
        a,
        b - ol.derivative() - a * ol,
        al * om - be * om.derivative(),
        be * om,
        ga * om * om,
    )


# ---------------------------------------------------------------------------
# growth from the series


def central_index(s: ComplexSeries, r: float, reliable: float = RELIABLE_FRACTION) -> int:
    """Largest index of the maximal term |c_n| r^n."""
    mags = np.abs(s.coefficients)
    nz = np.nonzero(mags)[0]
    if len(nz) == 0:
        raise ValueError("zero series")
    logs = np.log(mags[nz]) + nz * math.log(r)
    top = logs.max()
    ties = nz[logs >= top - 1e-9 * max(1.0, abs(top))]
    nu = int(ties.max())
    if nu > reliable * s.order:
        raise TruncationError(f"maximal term at n = {nu} for r = {r}; increase N (= {s.order})")
    return nu


@dataclass(frozen=True)
class OrderEstimate:
    order: float
    hyper_slope: Optional[float]
    radii: tuple[float, ...]
    nus: tuple[int, ...]
    log_nu_over_r: tuple[float, ...]


def order_estimate(s: ComplexSeries, radii: Sequence[float]) -> OrderEstimate:
    """Least-squares slopes of log nu(r) and log log nu(r) against log r."""
    if len(radii) < 3:
        raise ValueError("need at least three radii")
    nus = [central_index(s, r) for r in radii]
    lr = np.log(np.asarray(radii, dtype=float))
    ln = np.log(np.maximum(nus, 1).astype(float))
    slope = float(np.polyfit(lr, ln, 1)[0])
    hyper = None
    if min(nus) > 1:
        hyper = float(np.polyfit(lr, np.log(ln), 1)[0])
    return OrderEstimate(
        slope, hyper, tuple(float(r) for r in radii), tuple(nus),
        tuple(float(math.log(max(n, 1)) / r) for n, r in zip(nus, radii)),
    )


def compare(s: ComplexSeries, form: Callable[[complex], complex], radius: float) -> float:
    """max |series(z) - form(z)| / (1 + |form(z)|) over a disc around the base point."""
    worst = 0.0
    pts = [s.base_point] + annulus_grid(s.base_point, radius / 4, radius, 64)
    for z in pts:
        f = form(z)
        worst = max(worst, abs(s(z) - f) / (1 + abs(f)))
    return worst
