from fractions import Fraction

from hypothesis import assume, given, settings
from hypothesis import strategies as st

from hayman.algebra import Poly, RatFunc
from hayman.parser import parse_ratfunc as P
from hayman.toolkit import (
    HalfIntegerAlgebroid,
    MeromorphicUeV,
    NotMeromorphic,
    RationalU,
    constant_value,
    exp_integral_form,
    is_square,
    poly_antiderivative,
    rational_solutions_linear_ode,
    residue_spectrum,
    solve_scalar_for_constancy,
)
from strategies import polys, ratfuncs

linear_products = st.builds(
    lambda unit, fs: _product(unit, fs),
    st.integers(1, 6).map(Fraction),
    st.lists(st.tuples(st.integers(-5, 5), st.integers(-3, 3)), max_size=4),
)


def _product(unit: Fraction, factors) -> RatFunc:
    out = RatFunc.const(unit)
    for r, e in factors:
        out = out * RatFunc(Poly((-r, 1))) ** e
    return out


nonconstant_polys_zero_at_origin = st.lists(
    st.builds(Fraction, st.integers(-5, 5), st.integers(1, 3)), min_size=1, max_size=3
).map(lambda cs: Poly([0] + cs)).filter(lambda v: v.degree >= 1)


def log_derivative(u: RatFunc) -> RatFunc:
    return u.derivative() / u


class TestResidues:
    def test_examples(self):
        rs = residue_spectrum(P("2*z/(z^2-1)"))
        assert [(t, g) for t, g in rs.rational_residues] == [(1, Poly((-1, 0, 1)))]
        assert rs.all_poles_simple and not rs.nonrational_residues_present
        rs = residue_spectrum(P("-1/(2*z)"))
        assert rs.rational_residues == ((Fraction(-1, 2), Poly((0, 1))),)
        assert not residue_spectrum(P("1/z^2")).all_poles_simple

    def test_irrational_residues_detected(self):
        # 1/(z^2 - 2) has residues +-1/(2 sqrt 2)
        rs = residue_spectrum(P("1/(z^2-2)"))
        assert rs.nonrational_residues_present
        assert isinstance(exp_integral_form(P("1/(z^2-2)")), NotMeromorphic)

    @given(st.lists(st.tuples(st.integers(-6, 6), st.integers(-4, 4)), min_size=1, max_size=4, unique_by=lambda x: x[0]))
    @settings(max_examples=100)
    def test_components_are_coprime_divisors(self, poles):
        f = sum((RatFunc.const(c) / RatFunc(Poly((-r, 1))) for r, c in poles if c), RatFunc())
        assume(f)
        rs = residue_spectrum(f)
        comps = [g for _, g in rs.rational_residues]
        for g in comps:
            assert divmod(f.denom, g)[1].is_zero()
        expect = {Fraction(c) for _, c in poles if c}
        assert set(rs.residues()) == expect


class TestExpIntegral:
    def test_examples(self):
        e = exp_integral_form(P("3*z^2/(z^3-2)"))
        assert isinstance(e, RationalU) and log_derivative(e.u) == P("3*z^2/(z^3-2)")
        e = exp_integral_form(P("2 + 1/z"))
        assert isinstance(e, MeromorphicUeV)
        assert e.v == Poly((0, 2)) and log_derivative(e.u) == P("1/z")
        e = exp_integral_form(P("-1/(2*z)"))
        assert isinstance(e, HalfIntegerAlgebroid)
        assert isinstance(exp_integral_form(P("1/z^2")), NotMeromorphic)
        assert isinstance(exp_integral_form(P("1/(3*z)")), NotMeromorphic)

    @given(linear_products)
    @settings(max_examples=300)
    def test_rational_round_trip(self, u):
        f = log_derivative(u)
        e = exp_integral_form(f)
        assert isinstance(e, RationalU)
        assert log_derivative(e.u) == f
        assert constant_value(u / e.u) is not None

    @given(linear_products, nonconstant_polys_zero_at_origin)
    @settings(max_examples=300)
    def test_meromorphic_reconstruction(self, u, v):
        f = log_derivative(u) + RatFunc(v.derivative())
        e = exp_integral_form(f)
        assert isinstance(e, MeromorphicUeV)
        assert e.v == v
        assert log_derivative(e.u) + RatFunc(e.v.derivative()) == f

    @given(linear_products, st.integers(-5, 5))
    @settings(max_examples=100)
    def test_half_integer(self, u, r):
        f = log_derivative(u) + P("1/2") / RatFunc(Poly((-r, 1)))
        e = exp_integral_form(f)
        assert isinstance(e, HalfIntegerAlgebroid)
        assert isinstance(exp_integral_form(2 * f), RationalU)


class TestSquares:
    def test_examples(self):
        assert is_square(P("(z^2+2*z+1)/z^2")) == P("(z+1)/z")
        assert is_square(P("4*z^2")) == P("2*z")
        assert is_square(P("2*z^2")) is None
        assert is_square(P("z")) is None
        assert is_square(P("0")) == P("0")

    @given(ratfuncs(4))
    @settings(max_examples=300)
    def test_round_trip(self, s):
        r = is_square(s * s)
        assert r is not None
        assert r == s or r == -s
        assert r.is_zero() or r.numer.lc > 0


class TestConstancy:
    def test_constant_value_examples(self):
        assert constant_value(P("5")) == 5
        assert constant_value(P("z/z")) == 1
        assert constant_value(P("1/z")) is None

    def test_scalar_examples(self):
        assert solve_scalar_for_constancy(P("z"), P("-z")).values == (1,)
        assert solve_scalar_for_constancy(P("1"), P("2")).free
        assert not solve_scalar_for_constancy(P("z^2"), P("z"))

    @given(ratfuncs(3), st.fractions(min_value=-5, max_value=5, max_denominator=4))
    @settings(max_examples=200)
    def test_planted_constant(self, Q, c):
        # P chosen so that P + c Q is constant
        Pf = RatFunc.const(3) - Q * c
        sol = solve_scalar_for_constancy(Pf, Q)
        if sol.free:
            assert Q.derivative().is_zero()
        else:
            assert c in sol.values
        for v in sol.values:
            assert constant_value(Pf + Q * v) is not None

    @given(ratfuncs(3), ratfuncs(3))
    @settings(max_examples=200)
    def test_results_substitute_back(self, Pf, Q):
        for v in solve_scalar_for_constancy(Pf, Q).values:
            assert constant_value(Pf + Q * v) is not None


class TestLinearODE:
    def check(self, f, g, sols):
        for y in sols.members():
            assert y.derivative() - f * y - g == RatFunc()

    def test_examples(self):
        s = rational_solutions_linear_ode(P("0"), P("2*z"))
        assert s.complete and s.has_free_constant
        assert s.particular - P("z^2") == RatFunc.const(constant_value(s.particular - P("z^2")))
        assert constant_value(s.homogeneous) is not None
        s = rational_solutions_linear_ode(P("1/z"), P("0"))
        assert s.found and s.has_free_constant
        assert constant_value(s.homogeneous / P("z")) is not None
        s = rational_solutions_linear_ode(P("-1/z"), P("1"))
        self.check(P("-1/z"), P("1"), s)
        assert constant_value((s.particular - P("z/2")) * P("z")) is not None
        assert constant_value(s.homogeneous * P("z")) is not None

    def test_no_solution(self):
        s = rational_solutions_linear_ode(P("1"), P("0"))
        assert s.particular == RatFunc() and not s.has_free_constant
        s = rational_solutions_linear_ode(P("0"), P("1/z"))
        assert not s.found and s.complete

    def test_bound_exhaustion_reported(self):
        s = rational_solutions_linear_ode(P("0"), P("z^40"), max_numer_degree=10)
        assert not s.complete

    @given(
        st.lists(st.tuples(st.integers(-3, 3), st.integers(1, 3)), max_size=2),
        polys(3),
        ratfuncs(2),
    )
    @settings(max_examples=200)
    def test_planted_solution(self, den_factors, numer, f):
        den = RatFunc.const(1)
        for r, e in den_factors:
            den = den * RatFunc(Poly((-r, 1))) ** e
        y = RatFunc(numer) / den
        g = y.derivative() - f * y
        sols = rational_solutions_linear_ode(f, g)
        self.check(f, g, sols)
        if sols.complete:
            assert sols.found
            diff = y - sols.particular
            if diff:
                assert sols.has_free_constant
                assert constant_value(diff / sols.homogeneous) is not None


def test_poly_antiderivative():
    assert poly_antiderivative(Poly((0, 2))) == Poly((0, 0, 1))
    assert poly_antiderivative(Poly()) == Poly()
    assert poly_antiderivative(Poly((1, 0, 3))) == Poly((0, 1, 0, 1))


@given(polys(6))
@settings(max_examples=100)
def test_poly_antiderivative_inverts_derivative(p):
    q = poly_antiderivative(p)
    assert q.derivative() == p and (q.is_zero() or q.coeffs[0] == 0)
