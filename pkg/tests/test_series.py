import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from hayman.classifier import Coefficients, classify
from hayman.parser import parse_ratfunc as P
from hayman.series import (
    ComplexSeries,
    SolutionFormInstance,
    TruncationError,
    annulus_grid,
    case1_form,
    central_index,
    closed_form_instance,
    compare,
    equation_residual_series,
    jcosh,
    order_estimate,
    pole_cleared,
    residual_check,
    taylor_solve,
)
from strategies import ratfuncs, small_fractions


def C(*texts) -> Coefficients:
    return Coefficients(*(P(t) for t in texts))


def bell_numbers(n: int) -> list[int]:
    """Bell triangle, brute force."""
    row = [1]
    out = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
        out.append(row[0])
    return out


def exp_series(N: int) -> ComplexSeries:
    return ComplexSeries(0j, np.array([1 / math.factorial(n) for n in range(N + 1)], dtype=complex))


COSH = C("0", "0", "1", "0", "0")
EXP_EXP = C("-1", "0", "0", "0", "0")


class TestTaylorSolve:
    def test_cosh_plus_one(self):
        s = taylor_solve(COSH, 0, 2, 0, N=8)
        expect = [2, 0, 1 / 2, 0, 1 / 24, 0, 1 / 720, 0, 1 / 40320]
        assert np.allclose(s.coefficients, expect, rtol=1e-14, atol=1e-16)
        assert s.order == 8

    def test_bell_numbers(self):
        s = taylor_solve(EXP_EXP, 0, math.e, math.e, N=15)
        bells = bell_numbers(15)
        assert bells[:6] == [1, 1, 2, 5, 15, 52]
        for n in range(16):
            exact = math.e * bells[n] / math.factorial(n)
            assert abs(s.coefficients[n] - exact) <= 1e-13 * exact

    def test_shifted_base_point(self):
        c = C("0", "0", "1-z", "0", "-z^2")
        s = taylor_solve(c, 1, math.e - 2, math.e - 1, N=40)
        assert compare(s, lambda z: cmath.exp(z) - z - 1, 1.0) < 1e-12

    def test_complex_base_point(self):
        z0 = 0.5 + 0.5j
        w = lambda z: cmath.cosh(z) + 1
        s = taylor_solve(COSH, z0, w(z0), cmath.sinh(z0), N=40)
        assert compare(s, w, 1.0) < 1e-12

    def test_errors(self):
        with pytest.raises(ValueError, match="pole"):
            taylor_solve(C("1/z", "0", "0", "0", "0"), 0, 1, 0)
        with pytest.raises(ValueError, match="w0"):
            taylor_solve(COSH, 0, 0, 1)
        with pytest.raises(ValueError):
            taylor_solve(COSH, 0, 2, 0, N=1)

    def test_deterministic(self):
        c = C("1/(z+2)", "z", "1-z", "1/3", "-z^2")
        s1 = taylor_solve(c, Fraction(1, 2), 1.5, -0.25j, N=60)
        s2 = taylor_solve(c, Fraction(1, 2), 1.5, -0.25j, N=60)
        assert s1.coefficients.tobytes() == s2.coefficients.tobytes()

    @given(
        st.tuples(*(ratfuncs(2) for _ in range(5))),
        st.fractions(min_value=-2, max_value=2, max_denominator=3),
        small_fractions.filter(bool),
        small_fractions,
    )
    @settings(max_examples=100)
    def test_back_substitution(self, coeffs, z0, w0, w1):
        c = Coefficients(*coeffs)
        assume(all(f.denom(z0) != 0 for f in coeffs))
        s = taylor_solve(c, z0, w0, w1, N=24)
        total, scale = equation_residual_series(c, s)
        mask = scale > 0
        assert np.all(np.abs(total[~mask]) == 0)
        assert np.all(np.abs(total[mask]) <= 1e-8 * scale[mask])


class TestResidual:
    def test_case1(self):
        form = case1_form(P("1"), c1=1, c2=0)
        assert residual_check(COSH, form, annulus_grid(0, 0.5, 2.0, 100)) < 1e-9

    def test_cosh_2z(self):
        c = C("0", "0", "0", "0", "1")
        form = closed_form_instance(classify(c).primary, c, k1=2)
        assert abs(form(0.3) - cmath.cosh(0.6) / 2) < 1e-14
        assert residual_check(c, form) < 1e-9

    def test_wrong_instance_detected(self):
        wrong = SolutionFormInstance("cosh", jcosh, {})
        assert residual_check(COSH, wrong) > 1e-2

    def test_all_points_excluded(self):
        form = case1_form(P("1"), c1=1, c2=0)
        with pytest.raises(ValueError):
            residual_check(C("1/z", "0", "1", "0", "0"), form, [0j])


class TestCentralIndex:
    def test_exponential(self):
        assert central_index(exp_series(64), 5) == 5

    def test_polynomial(self):
        s = ComplexSeries(0j, np.array([1, 2, 3] + [0] * 20, dtype=complex))
        assert central_index(s, 1000) == 2

    def test_cosh_even_index(self):
        s = taylor_solve(COSH, 0, 2, 0, N=64)
        assert central_index(s, 10) == 10

    def test_truncation(self):
        with pytest.raises(TruncationError):
            central_index(exp_series(20), 30)

    def test_bell_central_index_matches_oracle(self):
        N = 400
        s = taylor_solve(EXP_EXP, 0, math.e, math.e, N=N)
        bells = bell_numbers(N)
        for r in (2, 3, 4):
            # exact maximal term from integer Bell numbers
            logs = [math.log(bells[n]) - math.lgamma(n + 1) + n * math.log(r) for n in range(N + 1)]
            assert central_index(s, r) == max(range(N + 1), key=lambda n: (logs[n], n))


class TestOrderEstimate:
    def test_cosh(self):
        s = taylor_solve(COSH, 0, 2, 0, N=256)
        est = order_estimate(s, (2, 4, 8, 16))
        assert abs(est.order - 1) <= 0.15

    def test_gaussian(self):
        # w = e^{z^2/2} solves w''w - w'^2 - w^2 = 0
        s = taylor_solve(C("0", "-1", "0", "0", "0"), 0, 1, 0, N=256)
        est = order_estimate(s, (2, 4, 6, 8))
        assert abs(est.order - 2) <= 0.2

    def test_double_exponential_signature(self):
        s = taylor_solve(EXP_EXP, 0, math.e, math.e, N=400)
        est = order_estimate(s, (2, 3, 4))
        # nu(r) ~ r e^r, so log(nu/r)/r -> 1
        for r, nu in zip(est.radii, est.nus):
            assert abs(math.log(nu / r) / r - 1) <= 0.3
        assert est.hyper_slope is not None and est.order > 2

    def test_needs_three_radii(self):
        with pytest.raises(ValueError):
            order_estimate(exp_series(64), (2, 4))


class TestCompare:
    def test_cosh(self):
        s = taylor_solve(COSH, 0, 2, 0, N=32)
        assert compare(s, lambda z: cmath.cosh(z) + 1, 1.0) < 1e-8

    def test_double_exponential(self):
        s = taylor_solve(EXP_EXP, 0, math.e, math.e, N=40)
        assert compare(s, lambda z: cmath.exp(cmath.exp(z)), 1.0) < 1e-6

    def test_wrong_slope_detected(self):
        s = taylor_solve(COSH, 0, 2, 0.5, N=32)
        assert compare(s, lambda z: cmath.cosh(z) + 1, 1.0) > 1e-2


class TestPoleClearing:
    def test_order_two_form(self):
        # w = z^-2 cosh(z^2/2) has a double pole at 0; W = z^2 w = cosh(z^2/2) is entire
        c = C("-1/z", "-4/z^2", "0", "0", "z^-2")
        cc = pole_cleared(c, P("z^2").numer)
        W = lambda z: cmath.cosh(z * z / 2)
        s = taylor_solve(cc, 1, W(1), cmath.sinh(0.5), N=60)
        assert compare(s, W, 0.5) < 1e-10

    @given(st.tuples(*(ratfuncs(1) for _ in range(5))), ratfuncs(2))
    @settings(max_examples=50)
    def test_residuals_correspond(self, coeffs, w):
        c = Coefficients(*coeffs)
        om = P("z^2+1")
        assume(w)
        # residual for W = om w equals om^2 times the residual for w
        assert pole_cleared(c, om.numer).residual(om * w) == om * om * c.residual(w)
