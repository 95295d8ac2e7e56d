from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from polybohr.extremal import ExtremalFunction, to_series
from polybohr.functionals import (
    FUNCTIONALS, EvalContext, evaluate_functional, majorant_sum, profile_functional, refined_sum,
)
from polybohr.multiindex import index_table
from polybohr.series import TailBound, TruncatedSeries
from polybohr.verify import random_contractions

PAIRING = {"A1": ("minus", -1), "A2": ("minus", -1), "A3": ("plus", 1), "A4": ("plus", 1),
           "I": ("plus", 1), "J": ("plus", 1), "M": ("minus", 1), "N": ("minus", 1)}


def test_eval_context():
    ctx = EvalContext.diagonal(3, 0.6, N=4, point_sign=-1)
    assert np.allclose(ctx.z, -0.2) and ctx.rb == pytest.approx(0.2) and ctx.t == 1
    assert ctx.diagonal_point() == (-1, pytest.approx(0.6))
    assert EvalContext([0.1, 0.2]).diagonal_point() is None
    with pytest.raises(ValueError):
        EvalContext([1.0, 0.0])
    with pytest.raises(ValueError):
        EvalContext([0.1], N=0)


def test_majorant_sum_examples():
    assert majorant_sum(TruncatedSeries.constant(0.7, 2), [0.3, 0.3], 1).value == 0
    w0 = ExtremalFunction(0.0, "minus", 1)
    assert majorant_sum(to_series(w0, 5), [1 / 3], 0).value == pytest.approx(1 / 3)
    w = ExtremalFunction(0.5, "minus", 2)
    fv = majorant_sum(to_series(w, 60), [0.1, 0.1], 1)
    closed = 0.75 * 0.2 / (1 - 0.5 * 0.2)
    assert abs(fv.value - closed) <= fv.truncation_error + 1e-15
    assert majorant_sum(w, [0.1, 0.1], 1).value == pytest.approx(closed, rel=1e-15)


def test_refined_sum_examples():
    zero = TruncatedSeries.zeros(2, 4)
    for name in FUNCTIONALS:
        assert evaluate_functional(name, zero, EvalContext.diagonal(2, 0.4, 3)).value == 0
    # N = 1 has no sgn group and the quadratic group starts at degree 1
    f = TruncatedSeries.polynomial(1, {(1,): 0.5})
    fv = refined_sum(f, EvalContext([0.4], 1))
    assert fv.breakdown["sgn_quadratic"] == 0
    assert fv.breakdown["quadratic"] == pytest.approx((1 + 0.4 / 0.6) * 0.25 * 0.16)
    # N = 3 (t = 1) moves degree 1 into the sgn group
    fv3 = refined_sum(f, EvalContext([0.4], 3))
    assert fv3.breakdown["sgn_quadratic"] == pytest.approx(0.25 * 0.4 ** 3 / 0.6)
    assert fv3.breakdown["quadratic"] == 0 and fv3.breakdown["majorant"] == 0


@pytest.mark.parametrize("a", [0.25, 0.5, 0.75])
@pytest.mark.parametrize("N", [1, 2, 3, 4])
def test_refined_sum_identity_one_variable(a, N):
    w = ExtremalFunction(a, "minus", 1)
    for x in (0.3, 0.5):
        target = (1 - a * a) * x ** N / (1 - x)
        assert refined_sum(w, EvalContext.diagonal(1, x, N, -1)).value == pytest.approx(
            target, rel=1e-13)
        fv = refined_sum(to_series(w, 60), EvalContext.diagonal(1, x, N, -1))
        assert abs(fv.value - target) <= fv.truncation_error + 1e-12


@pytest.mark.parametrize("n", [2, 3])
def test_refined_sum_below_collapsed_value(n):
    # the multivariate squared groups are smaller than their one-variable counterparts
    for a in (0.25, 0.5, 0.75):
        w = ExtremalFunction(a, "minus", n)
        for x in (0.3, 0.5):
            for N in (1, 2, 3):
                v = refined_sum(w, EvalContext.diagonal(n, x, N, -1)).value
                assert v < (1 - a * a) * x ** N / (1 - x)


def test_breakdown_sums_to_value():
    f = to_series(ExtremalFunction(0.6, "plus", 2), 30)
    for name in FUNCTIONALS:
        fv = evaluate_functional(name, f, EvalContext.diagonal(2, 0.35, 3))
        assert fv.value == pytest.approx(math.fsum(fv.breakdown.values()), rel=1e-12)


def test_paper_closed_expressions():
    a = 0.5
    for n in (1, 2, 3):
        for x in (0.1, 0.3, 0.45):
            for N in (1, 2, 3):
                w = ExtremalFunction(a, "minus", n)
                # A1 on the minus-form at -x: modulus and majorant are exact in every dimension
                fv = evaluate_functional("A1", w, EvalContext.diagonal(n, x, N, -1))
                assert fv.breakdown["modulus"] == pytest.approx((a + x) / (1 + a * x))
                assert fv.breakdown["majorant"] == pytest.approx(
                    (1 - a * a) * a ** (N - 1) * x ** N / (1 - a * x))
                # M on the minus-form at +x
                m = evaluate_functional("M", w, EvalContext.diagonal(n, x, N, 1)).value
                pp1 = (a - x) / (1 - a * x) + (1 - a * a) * a ** (N - 1) * x ** N / (
                    (1 - a * x) ** N * (1 - 2 * a * x))
                assert m == pytest.approx(abs(a - x) / (1 - a * x) + (pp1 - (a - x) / (1 - a * x)))
    # the A3 and J closed expressions at n = 1
    for x in (0.1, 0.3):
        w = ExtremalFunction(a, "plus", 1)
        b3 = (1 - a - a * a) * x * x - (3 + a) * x + 1
        assert evaluate_functional("A3", w, EvalContext.diagonal(1, x)).value == pytest.approx(
            1 - (1 - a) * b3 / ((1 + a * x) * (1 - x)))
        jt = -1 + 2 * x + x ** 2 - x ** 3 + 2 * x ** 3 * a + x ** 4 * a * a
        assert evaluate_functional("J", w, EvalContext.diagonal(1, x)).value == pytest.approx(
            1 + (1 - a * a) * jt / ((1 + a * x) ** 2 * (1 - x)))


def test_examples_near_radius():
    x = (math.sqrt(5) - 2) * 1.001
    a1 = evaluate_functional("A1", ExtremalFunction(0.999, "minus", 1),
                             EvalContext.diagonal(1, x, 1, -1))
    assert a1.value > 1
    x = (3 - math.sqrt(5)) / 2 - 1e-4
    a3 = evaluate_functional("A3", ExtremalFunction(0.0, "plus", 1), EvalContext.diagonal(1, x))
    assert a3.value <= 1
    c = TruncatedSeries.constant(-0.3 + 0.4j, 2)
    assert evaluate_functional("M", c, EvalContext.diagonal(2, 0.5, 2)).value == pytest.approx(0.5)
    for n in (1, 2, 3):
        w0 = ExtremalFunction(0.0, "minus", n)
        m = evaluate_functional("M", w0, EvalContext.diagonal(n, 0.4, 2, -1))
        assert m.value == pytest.approx(0.4)
        s = evaluate_functional("M", to_series(w0, 10), EvalContext.diagonal(n, 0.4, 2, -1))
        assert s.value == pytest.approx(0.4)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_profile_bounds_exact_path(n):
    for name, (form, sign) in PAIRING.items():
        for a in (0.0, 0.4, 0.9):
            for x in (0.15, 0.35):
                for N in (1, 2, 3):
                    NN = N if name in ("A1", "A2", "M", "N") else (2 if name in "IJ" else 1)
                    exact = evaluate_functional(name, ExtremalFunction(a, form, n),
                                                EvalContext.diagonal(n, x, NN, sign)).value
                    prof = profile_functional(name, a, x, NN)
                    if n == 1 or name in ("M", "N"):
                        assert exact == pytest.approx(prof, rel=1e-12, abs=1e-14)
                    else:
                        assert exact <= prof + 1e-14


@pytest.mark.parametrize("n", [1, 2, 3])
def test_two_path_equality(n, backend):
    for name, (form, sign) in PAIRING.items():
        for a in (0.0, 0.3, 0.95):
            w = ExtremalFunction(a, form, n)
            f = to_series(w, 60)
            for x in (0.2, 0.45, 0.8):
                for N in (1, 3):
                    ctx = EvalContext.diagonal(n, x, N, sign)
                    e = evaluate_functional(name, w, ctx)
                    s = evaluate_functional(name, f, ctx)
                    assert abs(e.value - s.value) <= e.truncation_error + s.truncation_error + 1e-10


@pytest.mark.parametrize("n", [1, 2, 3])
def test_monotone_in_radius(n):
    xs = np.linspace(0.01, 0.45, 40)
    for name, (form, sign) in PAIRING.items():
        for a in (0.0, 0.3, 0.7):
            w = ExtremalFunction(a, form, n)
            # at +x the minus-form modulus |a - x| dips to 0 at x = a, so the
            # derivative functionals are checked at -x where the profile grows
            point = -1 if name in ("M", "N") else sign
            vals = [evaluate_functional(name, w, EvalContext.diagonal(n, x, 2, point)).value
                    for x in xs]
            assert all(b >= v - 1e-15 for v, b in zip(vals, vals[1:])), name


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 3), st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_refined_bound_on_random_contractions(n, N, seed):
    f = random_contractions(n, 1, seed)[0]
    for x in (0.2, 0.5, 0.8):
        fv = refined_sum(f, EvalContext.diagonal(n, x, N))
        a0 = abs(f.coeffs[0])
        assert fv.value <= (1 - a0 * a0) * x ** N / (1 - x) + fv.truncation_error


def test_series_path_without_tail_is_uncertified():
    f = TruncatedSeries(1, 2, np.array([0.1, 0.2, 0.3]), TailBound())
    assert refined_sum(f, EvalContext([0.2])).truncation_error == math.inf


def test_general_point_M_matches_taylor_expansion(backend):
    # off-diagonal point: certified tail from the geometric bound
    w = ExtremalFunction(0.4, "plus", 2)
    z = np.array([0.1 + 0.05j, -0.15])
    ctx = EvalContext(z, 2)
    lo, hi = (evaluate_functional("M", to_series(w, K), ctx) for K in (30, 60))
    assert abs(lo.value - hi.value) <= lo.truncation_error + hi.truncation_error
    assert hi.truncation_error < 1e-12


def test_unknown_functional():
    with pytest.raises(ValueError):
        evaluate_functional("Q", TruncatedSeries.zeros(1, 1), EvalContext([0.1]))
