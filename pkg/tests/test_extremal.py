from __future__ import annotations

import math

import numpy as np
import pytest

from polybohr.extremal import (
    DomainError, ExtremalFunction, closed_eval, profile_coefficients, to_series,
)
from polybohr.multiindex import multinomial
from polybohr.series import evaluate


def test_profile_coefficients_examples():
    assert profile_coefficients(ExtremalFunction(0.0, "minus"), 3).tolist() == [0, -1, 0, 0]
    c = profile_coefficients(ExtremalFunction(0.5, "minus"), 3)
    assert c[1:].tolist() == [-0.75, -0.375, -0.1875]
    p = profile_coefficients(ExtremalFunction(0.5, "plus"), 4)
    assert p[1:].tolist() == [0.75, -0.375, 0.1875, -0.09375]


@pytest.mark.parametrize("form", ["minus", "plus"])
@pytest.mark.parametrize("a", [0.0, 0.3, 0.8])
def test_coefficients_are_taylor_coefficients(form, a):
    w = ExtremalFunction(a, form)
    c = profile_coefficients(w, 12)
    # compare with the profile evaluated at small s
    for s in (0.05, -0.07):
        assert abs(sum(ck * s ** k for k, ck in enumerate(c)) - w.profile(s)) < 1e-14
    for k in range(1, 8):
        assert closed_eval(w, 0.0).kth_derivative(k) == pytest.approx(math.factorial(k) * c[k])


def test_carlson_equalities():
    for a in np.arange(1, 10) / 10:
        c = np.abs(profile_coefficients(ExtremalFunction(float(a)), 21))
        for k in range(11):
            assert abs(c[2 * k + 1] - (1 - np.sum(c[:k + 1] ** 2))) < 1e-12
            if k:
                rhs = 1 - np.sum(c[:k] ** 2) - c[k] ** 2 / (1 + c[0])
                assert abs(c[2 * k] - rhs) < 1e-12


def test_to_series_examples():
    w1 = ExtremalFunction(0.4, "plus", 1)
    assert np.allclose(to_series(w1, 6).coeffs, profile_coefficients(w1, 6))
    f = to_series(ExtremalFunction(0.0, "minus", 2), 2)
    assert f.coefficient((1, 0)) == f.coefficient((0, 1)) == -1
    assert f.coefficient((1, 1)) == f.coefficient((2, 0)) == f.coefficient((0, 0)) == 0
    g = to_series(ExtremalFunction(0.5, "minus", 2), 4)
    c2 = profile_coefficients(ExtremalFunction(0.5), 2)[2]
    assert g.coefficient((1, 1)) == c2 * 2
    assert g.coefficient((2, 1)) == profile_coefficients(ExtremalFunction(0.5), 3)[3] * 3
    u = to_series(ExtremalFunction(0.5, "minus", 3), 4, unit=True)
    assert u.coefficient((1, 1, 0)) == pytest.approx(c2 * multinomial((1, 1, 0)) / 9)


def test_tail_descriptor():
    assert ExtremalFunction(0.0).tail().decay == 1.0
    assert ExtremalFunction(0.0).tail(K=1).is_exact
    t = ExtremalFunction(0.5, n=2).tail(unit=True)
    assert t.decay == 0.25 and t.scale == pytest.approx(1.5)


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("a", [0.0, 0.3, 0.7, 0.95])
@pytest.mark.parametrize("form", ["minus", "plus"])
def test_series_matches_closed_form(n, a, form, backend):
    w = ExtremalFunction(a, form, n)
    f = to_series(w, 60)
    for x in (0.1, 0.5, 0.8):
        for sign in (1, -1):
            v, tail = evaluate(f, [sign * x / n] * n)
            assert abs(v - closed_eval(w, x / n, sign).value) <= tail + 1e-10


def test_closed_eval_examples():
    w = ExtremalFunction(0.5, "minus", 2)
    assert abs(closed_eval(w, 0.1, -1).value) == pytest.approx(0.7 / 1.1)
    for form, sigma in (("minus", -1), ("plus", 1)):
        w0 = ExtremalFunction(0.0, form, 3)
        for sign in (1, -1):
            c = closed_eval(w0, 0.2, sign)
            assert c.value == pytest.approx(sigma * sign * 0.6)
            assert abs(c.df_value) == pytest.approx(0.6)
    with pytest.raises(DomainError):
        closed_eval(w, 0.5)
    with pytest.raises(ValueError):
        ExtremalFunction(1.0)
    with pytest.raises(ValueError):
        ExtremalFunction(0.5, "sideways")


def test_modulus_below_one():
    for n in (1, 2, 3):
        for a in (0.0, 0.5, 0.99):
            for form in ("minus", "plus"):
                w = ExtremalFunction(a, form, n)
                for x in np.linspace(0, 0.999, 50):
                    for sign in (1, -1):
                        assert abs(closed_eval(w, x / n, sign).value) < 1


def test_bounded_on_sample_grid():
    # |f| < 1 on the polydisk of polyradius 1/n, sampled on the distinguished boundary
    for n in (2, 3):
        w = ExtremalFunction(0.6, "minus", n)
        rng = np.random.default_rng(3)
        z = np.exp(2j * np.pi * rng.random((500, n))) / n * 0.999
        assert np.all(np.abs(w.profile(z.sum(axis=1))) < 1)
