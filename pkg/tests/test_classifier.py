from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from hayman.algebra import RatFunc
from hayman.classifier import (
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
    Consistency,
    Coefficients,
    HomogeneousSpecial,
    case4_solve,
    case5_dispatch,
    classify,
    consistency_reduce,
    derived_AB,
    local_expansion_data,
    normalize_hayman,
)
from hayman.parser import parse_ratfunc as P
from hayman.series import annulus_grid, closed_form_instance, residual_check
from hayman.toolkit import constant_value
from strategies import case1_tuples, case4_tuples, case5_tuples, coefficient_tuples, ratfuncs

nonzero_scalars = st.builds(Fraction, st.integers(-6, 6).filter(bool), st.integers(1, 4))


def C(*texts) -> Coefficients:
    return Coefficients(*(P(t) for t in texts))


class TestNormalize:
    def test_double_exponential_equation(self):
        assert normalize_hayman(-1, 0, 0, 0, 0, 0) == C("-1", "0", "0", "0", "0")

    @given(ratfuncs(2), ratfuncs(2), ratfuncs(2), ratfuncs(2), ratfuncs(2))
    @settings(max_examples=50)
    def test_kappa3_zero_passes_through(self, t1, t2, k0, k1, k2):
        assert normalize_hayman(t1, t2, k0, k1, k2, 0) == Coefficients(t1, t2, k1, k2, k0)

    def test_linear_kappa3(self):
        assert normalize_hayman(0, 0, 0, 0, 0, P("z")) == C("0", "0", "0", "2", "1")

    @given(ratfuncs(1), ratfuncs(1), ratfuncs(1), ratfuncs(1), ratfuncs(1), ratfuncs(1), ratfuncs(2))
    @settings(max_examples=100)
    def test_substitution_agrees(self, t1, t2, k0, k1, k2, k3, f):
        # residual of the original equation at f equals residual of the normal form at w = f - k3
        f1, f2 = f.derivative(), f.derivative().derivative()
        orig = f * f2 - f1 * f1 + t1 * f * f1 + t2 * f * f - k0 - k1 * f - k2 * f1 - k3 * f2
        assert normalize_hayman(t1, t2, k0, k1, k2, k3).residual(f - k3) == orig


class TestDerived:
    def test_constant_alpha(self):
        d = derived_AB(C("0", "0", "3", "0", "1"))
        assert d.A == P("0") and d.B == P("6")

    def test_half_integer_data(self):
        assert derived_AB(C("-1/(2*z)", "-3/(4*z^2)", "0", "0", "-1")).A == P("1/z")

    @pytest.mark.parametrize("N", [-3, -2, 0, 1, 4])
    def test_family(self, N):
        c = Coefficients.of(a=RatFunc.const(Fraction(N, 2)) / RatFunc.z(), gamma=RatFunc.z() ** N)
        assert derived_AB(c).A == RatFunc.const(-2 * N) / RatFunc.z()

    def test_gamma_zero_flags_A(self):
        d = derived_AB(C("1", "0", "z", "1", "0"))
        assert d.A is None and d.flags and d.B == P("2*z + 1")

    @given(coefficient_tuples())
    @settings(max_examples=100)
    def test_defining_identities(self, c):
        d = derived_AB(c)
        a, b, al, be, ga = c.as_tuple()
        assert d.B == 2 * al + be.derivative() + a * be
        if ga:
            assert d.A * ga == be * (al + be.derivative()) - ga.derivative() - a * (2 * ga - be * be)


class TestLocalExpansion:
    def test_double_zero(self):
        assert local_expansion_data(C("1", "z", "z+2", "0", "0"), 1).p == 2
        assert local_expansion_data(C("1", "z", "0", "0", "0"), 3).p == 2

    def test_unit_gamma(self):
        le = local_expansion_data(C("0", "0", "0", "0", "-1"), 1)
        assert le.p == 1 and set(le.a0) == {1, -1}

    def test_irrational_pair(self):
        le = local_expansion_data(C("0", "0", "0", "0", "-2"), 1)
        assert le.irrational_pair and le.a0 == ()

    def test_pole_rejected(self):
        with pytest.raises(ValueError):
            local_expansion_data(C("1/z", "0", "0", "0", "1"), 0)

    def test_quadratic_gamma_against_series_oracle(self):
        c = C("0", "0", "0", "0", "-z^2")
        le = local_expansion_data(c, 2)
        assert set(le.a0) == {2, -2}
        # oracle: substitute w = a0 x + a1 x^2 + a2 x^3, x = z - 2, and solve order by order
        x, a1, a2 = sympy.symbols("x a1 a2")
        for a0 in le.a0:
            w = a0 * x + a1 * x**2 + a2 * x**3
            expr = sympy.expand(w.diff(x, 2) * w - w.diff(x) ** 2 + (x + 2) ** 2)
            first = sympy.solve(expr.coeff(x, 1), a1)
            assert first == [le.a1[a0]]


class TestClassifyExamples:
    def test_case1(self):
        cl = classify(C("0", "0", "1", "0", "0"))
        assert isinstance(cl.primary, Case1) and cl.primary.alpha == P("1")

    def test_homogeneous_special(self):
        cl = classify(C("-1", "0", "0", "0", "0"))
        assert isinstance(cl.primary, HomogeneousSpecial)
        assert cl.primary.a == P("-1") and cl.primary.b == P("0")
        assert "Case3" in cl.labels

    def test_case4(self):
        c = C("0", "0", "1-z", "0", "-z^2")
        cl = classify(c)
        br = cl.primary
        assert isinstance(br, Case4) and (br.h1, br.h2) == (P("1"), P("z"))
        assert br.consistency[0].status is Consistency.CONSISTENT
        # e^z - z - 1 solves w' = w + z; sympy oracle on the full equation
        z = sympy.Symbol("z")
        w = sympy.exp(z) - z - 1
        res = w.diff(z, 2) * w - w.diff(z) ** 2 - (1 - z) * w + z**2
        assert sympy.simplify(res) == 0

    def test_case2_reported_with_forced_rational(self):
        cl = classify(C("0", "1", "z", "1", "0"))
        br = cl.primary
        assert isinstance(br, Case2) and br.h == P("-z")
        assert br.consistency[0].status is Consistency.FORCED_RATIONAL
        assert any("ForcedRational" in f for f in br.flags)

    def test_case5e_reported_with_vacuity_flag(self):
        cl = classify(C("0", "0", "0", "2", "1"))
        br = cl.find("Case5e")
        assert isinstance(br, Case5e)
        assert any(f.startswith("vacuous") for f in br.flags)

    def test_no_branch(self):
        cl = classify(C("z", "1", "1", "0", "z"))
        assert cl.labels == ("NoBranch",)
        assert cl.primary.flags

    def test_primary_is_first_in_list_order(self):
        cl = classify(C("0", "0", "0", "0", "1"))
        assert cl.labels == ("Case5a_Rational", "Case5d")


class TestCase4Solve:
    def test_example(self):
        c = C("0", "0", "1-z", "0", "-z^2")
        pairs, _ = case4_solve(c, derived_AB(c))
        assert pairs == [(P("1"), P("z"))]

    def test_non_square_discriminant(self):
        c = C("0", "0", "0", "0", "-z^2/2")
        pairs, notes = case4_solve(c, derived_AB(c))
        assert pairs == [] and any("quadratic extension" in n for n in notes)

    def test_candidate_cancelling_beta_excluded(self):
        # gamma = 0 makes h2 = -beta one of the two roots
        c = C("0", "0", "1", "z", "0")
        pairs, notes = case4_solve(c, derived_AB(Coefficients.of(gamma=1)))
        assert any("h2 + beta == 0" in n for n in notes)
        assert all(not (h2 + c.beta).is_zero() for _, h2 in pairs)

    @given(case4_tuples())
    @settings(max_examples=200)
    def test_planted_pair_recovered(self, data):
        c, (h1, h2) = data
        d = derived_AB(c)
        assume(c.gamma and d.intermediates["A'+aA-2b"] and (h2 + c.beta))
        pairs, _ = case4_solve(c, d)
        assert (h1, h2) in pairs


class TestCase5Examples:
    def test_autonomous(self):
        c = C("0", "0", "0", "0", "1")
        d = derived_AB(c)
        assert d.A == P("0") and d.B == P("0")
        br = classify(c).primary
        assert isinstance(br, Case5a_Rational) and br.k1sq is None
        for k1sq in (Fraction(1), Fraction(4), Fraction(1, 9)):
            assert br.k2sq_for(k1sq) == 1 / k1sq

    def test_order_two_data(self):
        c = C("-1/z", "-4/z^2", "0", "0", "z^-2")
        assert derived_AB(c).A == P("4/z")
        br = classify(c).primary
        assert isinstance(br, Case5a_Rational) and br.k1sq is None
        for k1sq in (Fraction(1), Fraction(9, 4)):
            assert br.k2sq_for(k1sq) == 1 / k1sq

    def test_transcendental(self):
        # 2(a' + a^2 + b) + (g'/g)' + a g'/g = 0 with gamma = 1 forces b = -a' - a^2
        br = classify(C("z", "-z^2-1", "0", "0", "1")).primary
        assert isinstance(br, Case5a_Transcendental) and br.v1.degree == 2

    def test_dispatch_labels(self):
        c = C("0", "0", "0", "0", "1")
        labels = {b.label for b in case5_dispatch(c, derived_AB(c))}
        assert labels == {"Case5a_Rational", "Case5d"}
        c = C("0", "0", "0", "2", "1")
        assert "Case5e" in {b.label for b in case5_dispatch(c, derived_AB(c))}


class TestConsistency:
    def test_case4_reduction(self):
        rep = consistency_reduce(P("1"), P("z"), C("0", "0", "1-z", "0", "-z^2"))
        assert rep.status is Consistency.CONSISTENT

    def test_case2_forced_rational(self):
        c = C("0", "1", "z", "1", "0")
        rep = consistency_reduce(P("z"), P("0"), c)
        assert rep.status is Consistency.FORCED_RATIONAL
        assert rep.C2 == 2 * c.b and rep.C1 == -2 * c.alpha
        assert P("z") in rep.candidates

    def test_inconsistent(self):
        rep = consistency_reduce(P("0"), P("0"), C("0", "0", "0", "0", "1"))
        assert rep.status is Consistency.INCONSISTENT and rep.C0 == P("-1")

    @given(ratfuncs(2), ratfuncs(2), coefficient_tuples())
    @settings(max_examples=100)
    def test_coefficients_against_direct_substitution(self, p, q, c):
        # for any rational w, w' - p w - q is a free parameter; pick w and q so the ODE holds
        rep = consistency_reduce(p, q, c)
        for w in (RatFunc.const(1), P("z"), P("z^2+1")):
            qq = w.derivative() - p * w
            r = consistency_reduce(p, qq, c)
            assert c.residual(w) == r.C2 * w * w + r.C1 * w + r.C0
        assert rep.consistent == (not rep.C2 and not rep.C1 and not rep.C0)


def _scaled_checks(br, bs, k):
    assert bs.label == br.label
    if isinstance(br, Case1):
        assert bs.alpha == br.alpha * k
    elif isinstance(br, Case2):
        assert bs.h == br.h
    elif isinstance(br, Case3):
        assert bs.h_search.particular == br.h_search.particular
    elif isinstance(br, Case4):
        assert (bs.h1, bs.h2, bs.g) == (br.h1, br.h2 * k, br.g)
    elif isinstance(br, Case5a_Rational):
        assert bs.k1sq == br.k1sq
        if br.k1sq is None:
            assert bs.k2sq_coeffs == tuple(x * k * k for x in br.k2sq_coeffs)
        else:
            assert bs.k2sq == br.k2sq * k * k
    elif isinstance(br, Case5b):
        assert bs.k1sq == br.k1sq
    elif isinstance(br, Case5c):
        assert bs.k1 == br.k1 * k
    elif isinstance(br, Case5d):
        assert bs.k1sq == br.k1sq * k * k


def _shifted_checks(br, bs, s):
    assert bs.label == br.label
    if isinstance(br, Case1):
        assert bs.alpha == br.alpha.shift(s)
    elif isinstance(br, Case2):
        assert bs.h == br.h.shift(s)
    elif isinstance(br, Case4):
        assert (bs.h1, bs.h2) == (br.h1.shift(s), br.h2.shift(s))
    elif isinstance(br, Case5a_Rational):
        assert constant_value(bs.R / br.R.shift(s)) is not None
        assert constant_value(bs.S / br.S.shift(s)) is not None
        assert bs.A == br.A.shift(s)
    elif isinstance(br, Case5a_Transcendental):
        assert bs.v1.degree == br.v1.degree


class TestCovariance:
    @given(coefficient_tuples(), nonzero_scalars)
    @settings(max_examples=200)
    def test_scaling(self, c, k):
        cl, cs = classify(c), classify(c.scale(k))
        assert cs.labels == cl.labels
        assert cs.derived.A == cl.derived.A
        assert cs.derived.B == cl.derived.B * k
        for br, bs in zip(cl.branches, cs.branches):
            _scaled_checks(br, bs, k)

    @given(coefficient_tuples(), st.fractions(min_value=-3, max_value=3, max_denominator=4))
    @settings(max_examples=150)
    def test_shift(self, c, s):
        cl, cs = classify(c), classify(c.shift(s))
        assert cs.labels == cl.labels
        if cl.derived.A is not None:
            assert cs.derived.A == cl.derived.A.shift(s)
        for br, bs in zip(cl.branches, cs.branches):
            _shifted_checks(br, bs, s)


class TestBranchInvariants:
    @given(coefficient_tuples())
    @settings(max_examples=200)
    def test_case4_identities(self, c):
        a, b, al, be, ga = c.as_tuple()
        for br in classify(c).branches:
            if isinstance(br, Case4):
                h1, h2 = br.h1, br.h2
                assert (h1.derivative() + a * h1 + b).is_zero()
                assert (h2 * h2 + be * h2 + ga).is_zero()
                assert h2.derivative() == (h1 - a) * h2 + al + be * h1

    @given(st.one_of(case5_tuples(), coefficient_tuples()))
    @settings(max_examples=200)
    def test_case5_constants(self, c):
        for br in classify(c).branches:
            if isinstance(br, Case5a_Rational):
                if br.k1sq is not None:
                    assert br.k1sq != 0 and br.k2sq != 0
                else:
                    assert any(br.k2sq_coeffs)
            elif isinstance(br, (Case5b, Case5d)):
                assert br.k1sq != 0
            elif isinstance(br, Case5c):
                assert br.k1 != 0


# away from the integer poles produced by the strategies
GRID = annulus_grid(0.5 + 0.5j, 0.05, 0.3, 100)


class TestClosedFormResidual:
    @given(st.one_of(case1_tuples(), case5_tuples()))
    @settings(max_examples=60)
    def test_residual_small(self, c):
        checked = 0
        for br in classify(c).branches:
            if isinstance(br, (Case1, Case5a_Rational, Case5b)):
                form = closed_form_instance(br, c, c1=Fraction(1, 3))
                if form is None:
                    continue
                assert residual_check(c, form, GRID) < 1e-8
                checked += 1
        assume(checked)
