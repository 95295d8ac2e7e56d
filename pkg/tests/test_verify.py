from __future__ import annotations

import math

import numpy as np
import pytest

from polybohr.extremal import ExtremalFunction, to_series
from polybohr.series import TruncatedSeries
from polybohr.verify import (
    FAIL, INCONCLUSIVE, PASS, THEOREMS, UnknownTheoremError, check_below, check_coefficients,
    check_derivative_bound, check_lemma, check_refined_bound, check_schwarz_pick, check_sharp,
    random_contraction, random_contractions,
)


def test_below_examples():
    r = check_below("2.1a", 1, N=1, eps=1e-3)
    assert r.verdict == PASS and r.margin > 0
    assert len(r.records) == 11
    r = check_below("2.3i", 2, eps=1e-3)
    assert r.verdict == PASS
    assert check_below("2.1a", 1, N=1, eps=0.49).margin > r.margin
    with pytest.raises(UnknownTheoremError):
        check_below("9.9", 1)
    with pytest.raises(ValueError):
        check_below("2.1a", 1)
    with pytest.raises(ValueError):
        check_below("2.1a", 1, N=1, eps=0.5)


def test_sharp_example():
    r = check_sharp("2.1a", 1, N=1, eps=0.01)
    assert r.verdict == PASS
    assert any(rec.a == pytest.approx(0.999) for rec in r.witnesses)
    limit = [rec for rec in r.records if rec.mode == "sharp-limit"][0]
    assert limit.value > 0


@pytest.mark.parametrize("tag", list(THEOREMS))
def test_one_variable_grid(tag):
    spec = THEOREMS[tag]
    params = ([{"N": N} for N in range(1, 6)] if spec.parameter == "N" else
              [{"a0": a} for a in (0.0, 0.5, 0.9)] if spec.parameter == "a0" else [{}])
    for p in params:
        assert check_below(tag, 1, eps=1e-3, **p).verdict == PASS
        assert check_sharp(tag, 1, eps=1e-2, **p).verdict == PASS
        inside = check_sharp(tag, 1, eps=1e-2, side=-1, **p)
        assert inside.verdict == FAIL and not inside.witnesses


@pytest.mark.parametrize("tag", ["2.1a", "2.4n"])
def test_series_path_agrees(tag):
    a = check_below(tag, 2, N=2, path="exact")
    b = check_below(tag, 2, N=2, path="series")
    assert b.verdict == PASS
    for ra, rb in zip(a.records, b.records):
        assert abs(ra.value - rb.value) <= rb.tail + 1e-10


def test_limit_expressions_match_near_one():
    # the recorded limit has the sign of the functional minus 1 for a close to 1
    for tag, spec in THEOREMS.items():
        if spec.parameter == "a0":
            continue
        for x in (0.2, 0.3, 0.4):
            w = ExtremalFunction(1 - 1e-7, spec.form, 1)
            from polybohr.functionals import EvalContext, evaluate_functional
            v = evaluate_functional(spec.functional, w, EvalContext.diagonal(1, x, 2, spec.point_sign))
            lim = spec.limit(x, 2, None)
            if abs(lim) > 1e-3:
                assert (v.value > 1) == (lim > 0), (tag, x)


def test_inequality_verdicts_are_tail_aware():
    f = TruncatedSeries(1, 1, np.array([0.0, 0.5]))  # no tail certificate
    rep = check_schwarz_pick(f, samples=3, seed=1)
    assert rep.verdict == INCONCLUSIVE


def test_coefficient_checks():
    w = ExtremalFunction(0.5, "minus", 1)
    rep = check_coefficients(to_series(w, 20))
    assert rep.verdict == PASS
    for rec in rep.records:  # equality for the one-variable profile
        assert abs(rec.value - rec.bound) < 1e-12
    zero = check_coefficients(TruncatedSeries.zeros(2, 5))
    assert zero.verdict == PASS
    assert [r.bound for r in zero.records if r.N % 2] == pytest.approx(
        [2 ** (d / 2) for d in (1, 3, 5)])
    for f in random_contractions(2, 5, seed=11):
        assert check_coefficients(f).verdict == PASS


def test_schwarz_pick_examples():
    c = TruncatedSeries.constant(0.6, 2)
    assert check_schwarz_pick(c, samples=20, seed=3).verdict == PASS
    z1 = TruncatedSeries.polynomial(3, {(1, 0, 0): 1})
    pts = [[t, 0, 0] for t in (0.1, 0.5, 0.9)]
    rep = check_schwarz_pick(z1, points=pts)
    assert rep.verdict == PASS
    assert all(abs(r.value - r.bound) < 1e-15 for r in rep.records)
    w = to_series(ExtremalFunction(0.5, "minus", 1), 80)
    rep = check_schwarz_pick(w, points=[[-0.3], [-0.6]])
    assert rep.verdict == PASS
    assert all(abs(r.value - r.bound) < 1e-12 for r in rep.records)


def test_derivative_bound_examples():
    f = to_series(ExtremalFunction(0.5, "minus", 1), 60)
    assert check_derivative_bound(f, (0,), [0.2]).verdict == PASS
    rec = check_derivative_bound(f, (1,), [0.0])
    assert rec.verdict == PASS and rec.value == pytest.approx(0.75) and rec.bound == pytest.approx(0.75)
    g = to_series(ExtremalFunction(0.5, "minus", 2), 40, unit=True)
    assert check_derivative_bound(g, (1, 1), [0.0, 0.0]).verdict == PASS
    with pytest.raises(ValueError):
        check_derivative_bound(g, (1, 0), [1.0, 0.0])


def test_random_contraction_is_deterministic():
    a = random_contraction(2, np.random.default_rng(5))
    b = random_contraction(2, np.random.default_rng(5))
    assert np.array_equal(a.coeffs, b.coeffs)
    assert a.tail.is_exact


@pytest.mark.parametrize("tag", ["lemma1", "lemma2", "lemma4", "lemma5"])
def test_lemma_reports(tag):
    reps = check_lemma(tag, 2, N=2, seed=3, count=3)
    assert reps and all(r.verdict == PASS for r in reps)


def test_refined_bound_on_extremal_unit_instances():
    for n in (1, 2, 3):
        f = to_series(ExtremalFunction(0.3, "plus", n), 40, unit=True)
        assert check_refined_bound(f, 2).verdict == PASS
