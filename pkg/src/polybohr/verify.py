"""Executable checks of the radius theorems and the supporting lemmas.

Theorem checks evaluate a functional on the extremal family at a diagonal
point ``x = n * rb`` just inside (``check_below``) or just outside
(``check_sharp``) the radius.  Lemma checks run on seeded random polynomial
contractions and on extremal functions rescaled to the unit polydisk.

Verdicts are tail-aware: an inequality is PASS only when ``value + tail`` is
within the bound, FAIL only when ``value - tail`` is beyond it, and
INCONCLUSIVE otherwise.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable

import numpy as np

from .extremal import FORMS, ExtremalFunction, to_series
from .functionals import EvalContext, evaluate_functional, refined_sum
from .multiindex import MultiIndex, alpha_factorial, enumerate_degree, validate
from .radii import Family, RadiusEquation, solve
from .series import (
    EPS, TruncatedSeries, degree_majorants, degree_square_sums, evaluate,
    taylor_coefficients,
)

PASS, FAIL, INCONCLUSIVE = "PASS", "FAIL", "INCONCLUSIVE"
WITNESS, MISS = "WITNESS", "MISS"

DEFAULT_SEED = 20240917
A_GRID = (0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99)
A_SWEEP = tuple(1.0 - 10.0 ** -j for j in range(1, 7))
WITNESS_MARGIN = 1e-6
EQUALITY_TOL = 1e-12
SERIES_K = 60


def default_seed() -> int:
    return int(os.environ.get("POLYBOHR_SEED", DEFAULT_SEED))


class UnknownTheoremError(KeyError):
    pass


# -- theorem registry --------------------------------------------------------

@dataclass(frozen=True)
class TheoremSpec:
    tag: str
    functional: str
    form: str
    point_sign: int
    parameter: str | None  # "N", "a0" or None
    equation: Callable[..., RadiusEquation]
    limit: Callable[[float, int | None, float | None], float]
    heuristic: bool = False
    min_N: int = 1

    def radius_equation(self, N=None, a0=None) -> RadiusEquation:
        if self.parameter == "N":
            return self.equation(N)
        if self.parameter == "a0":
            return self.equation(a0)
        return self.equation()


def _tail_poly(x, N):
    return (1 + x) * (1 - 2 * x) * (1 - x) ** (N - 1)


THEOREMS: dict[str, TheoremSpec] = {
    spec.tag: spec for spec in [
        TheoremSpec("2.1a", "A1", "minus", -1, "N",
                    lambda N: RadiusEquation(Family.PSI_N, N=N),
                    lambda x, N, a0: 2 * (1 + x) * x ** N - (1 - x) ** 2),
        TheoremSpec("2.1b", "A2", "minus", -1, "N",
                    lambda N: RadiusEquation(Family.PSI_PRIME_N, N=N),
                    lambda x, N, a0: (1 + x) ** 2 * x ** N - (1 - x * x) * (1 - x)),
        TheoremSpec("2.2a", "A3", "plus", 1, "a0",
                    lambda a0: RadiusEquation(Family.R_A0_CLOSED, a0=a0),
                    lambda x, N, a0: -((1 - a0 - a0 * a0) * x * x - (3 + a0) * x + 1)),
        TheoremSpec("2.2b", "A4", "plus", 1, "a0",
                    lambda a0: RadiusEquation(Family.CUBIC_A0, a0=a0, variant="proof"),
                    lambda x, N, a0: -((1 - a0 * a0) * x ** 3 - (1 + 2 * a0) * x * x - 2 * x + 1),
                    heuristic=True),
        TheoremSpec("2.3i", "I", "plus", 1, None,
                    lambda: RadiusEquation(Family.SQRT17_CLOSED),
                    lambda x, N, a0: (x * x + 1) * (2 * x * x + 3 * x - 1)),
        TheoremSpec("2.3j", "J", "plus", 1, None,
                    lambda: RadiusEquation(Family.QUARTIC),
                    lambda x, N, a0: x ** 4 + x ** 3 + x * x + 2 * x - 1),
        TheoremSpec("2.4m", "M", "minus", 1, "N",
                    lambda N: RadiusEquation(Family.TILDE_N, N=N),
                    lambda x, N, a0: 2 * x ** N - _tail_poly(x, N)),
        TheoremSpec("2.4n", "N", "minus", 1, "N",
                    lambda N: RadiusEquation(Family.TILDE_PRIME_N, N=N),
                    lambda x, N, a0: x ** N - _tail_poly(x, N)),
    ]
}

LEMMAS = ("lemma4", "lemma5", "lemma1", "lemma2")
TAGS = tuple(THEOREMS) + LEMMAS


def theorem(tag: str) -> TheoremSpec:
    try:
        return THEOREMS[tag]
    except KeyError:
        raise UnknownTheoremError(f"unknown theorem tag {tag!r}; expected one of {TAGS}") from None


# -- reports -----------------------------------------------------------------

@dataclass(frozen=True)
class Record:
    theorem: str
    mode: str
    n: int
    N: int | None
    a0: float | None
    a: float | None
    x: float
    value: float
    bound: float
    tail: float
    verdict: str

    def __post_init__(self):
        for name in ("a0", "a", "x", "value", "bound", "tail"):
            v = getattr(self, name)
            if v is not None:
                object.__setattr__(self, name, float(v))

    @property
    def margin(self) -> float:
        """Signed slack: positive means the record supports its claim."""
        if self.mode == "below" or self.mode.startswith("lemma"):
            return self.bound - (self.value + self.tail)
        if self.mode == "sharp-limit":
            return self.value
        return self.value - self.tail - (self.bound + WITNESS_MARGIN)

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass
class VerificationReport:
    theorem: str
    mode: str
    params: dict
    records: list[Record] = field(default_factory=list)
    verdict: str = PASS

    @property
    def margin(self) -> float:
        if not self.records:
            return math.nan
        if self.mode.startswith("sharp"):
            probes = [r.margin for r in self.records if r.mode != "sharp-limit"]
            return max(probes) if probes else math.nan
        return min(r.margin for r in self.records)

    @property
    def failures(self) -> list[Record]:
        return [r for r in self.records if r.verdict in (FAIL, INCONCLUSIVE, MISS)]

    @property
    def witnesses(self) -> list[Record]:
        return [r for r in self.records if r.verdict == WITNESS]

    def summary(self) -> dict:
        return {"theorem": self.theorem, "mode": self.mode, **self.params,
                "records": len(self.records), "margin": self.margin,
                "verdict": self.verdict}


def combine_verdicts(verdicts: Iterable[str]) -> str:
    verdicts = list(verdicts)
    if FAIL in verdicts:
        return FAIL
    if INCONCLUSIVE in verdicts:
        return INCONCLUSIVE
    return PASS


def _inequality_verdict(value: float, tail: float, bound: float, tol: float = 0.0) -> str:
    if math.isnan(value) or math.isinf(tail):
        return INCONCLUSIVE
    if value + tail <= bound + tol:
        return PASS
    if value - tail > bound + tol:
        return FAIL
    return INCONCLUSIVE


# -- theorem checks ----------------------------------------------------------

def _functional_value(spec: TheoremSpec, n: int, a: float, x: float, N: int | None,
                      path: str, K: int):
    w = ExtremalFunction(a, spec.form, n)
    f = w if path == "exact" else to_series(w, K)
    ctx = EvalContext.diagonal(n, x, N or 1, spec.point_sign)
    return evaluate_functional(spec.functional, f, ctx)


def _check_params(spec: TheoremSpec, N, a0):
    if spec.parameter == "N":
        if N is None or N < spec.min_N:
            raise ValueError(f"{spec.tag} needs N >= {spec.min_N}")
        return N, None
    if spec.parameter == "a0":
        if a0 is None:
            raise ValueError(f"{spec.tag} needs a0")
        return None, float(a0)
    return None, None


def _path(path: str) -> str:
    if path not in ("exact", "series"):
        raise ValueError("path must be 'exact' or 'series'")
    return path


def check_below(tag: str, n: int, N: int | None = None, a0: float | None = None,
                eps: float = 1e-3, path: str = "exact", K: int = SERIES_K) -> VerificationReport:
    """Functional on the extremal family at ``x = root * (1 - eps)``.

    The parameter ``a`` runs over :data:`A_GRID`; theorems whose radius
    depends on ``a0`` use ``a = a0`` only.
    """
    spec = theorem(tag)
    if not (0.0 < eps < 0.5):
        raise ValueError("eps must lie in (0, 0.5)")
    N, a0 = _check_params(spec, N, a0)
    root = solve(spec.radius_equation(N, a0)).midpoint
    x = root * (1 - eps)
    report = VerificationReport(tag, "below", {"n": n, "N": N, "a0": a0, "eps": eps,
                                               "path": _path(path)})
    grid = (a0,) if spec.parameter == "a0" else A_GRID
    for a in grid:
        fv = _functional_value(spec, n, a, x, N, path, K)
        report.records.append(Record(tag, "below", n, N, a0, a, x, fv.value, 1.0,
                                     fv.truncation_error,
                                     _inequality_verdict(fv.value, fv.truncation_error, 1.0)))
    report.verdict = combine_verdicts(r.verdict for r in report.records)
    return report


def check_sharp(tag: str, n: int, N: int | None = None, a0: float | None = None,
                eps: float = 1e-2, path: str = "exact", K: int = SERIES_K,
                side: int = 1) -> VerificationReport:
    """Look for ``a`` with ``value - tail > 1 + 1e-6`` at ``x = root * (1 + side*eps)``.

    ``a`` sweeps :data:`A_SWEEP` (``a = a0`` for the ``a0`` theorems).  The
    ``a -> 1`` limit expression, whose positivity is equivalent to failure of
    the inequality for ``a`` close to 1, is recorded as a ``sharp-limit``
    record.  PASS needs a witness and a positive limit.  ``side=-1`` probes
    inside the radius, where PASS must not occur.
    """
    spec = theorem(tag)
    if not (0.0 < eps < 0.2):
        raise ValueError("eps must lie in (0, 0.2)")
    if side not in (1, -1):
        raise ValueError("side must be +1 or -1")
    N, a0 = _check_params(spec, N, a0)
    root = solve(spec.radius_equation(N, a0)).midpoint
    x = root * (1 + side * eps)
    mode = "sharp-heuristic" if spec.heuristic else "sharp"
    report = VerificationReport(tag, mode, {"n": n, "N": N, "a0": a0, "eps": eps,
                                            "path": _path(path), "side": side})
    grid = (a0,) if spec.parameter == "a0" else A_SWEEP
    for a in grid:
        fv = _functional_value(spec, n, a, x, N, path, K)
        hit = fv.value - fv.truncation_error > 1.0 + WITNESS_MARGIN
        report.records.append(Record(tag, mode, n, N, a0, a, x, fv.value, 1.0,
                                     fv.truncation_error, WITNESS if hit else MISS))
    limit = spec.limit(x, N, a0)
    report.records.append(Record(tag, "sharp-limit", n, N, a0, None, x, limit, 0.0, 0.0,
                                 PASS if limit > 0 else FAIL))
    found = any(r.verdict == WITNESS for r in report.records)
    report.verdict = PASS if found and limit > 0 else FAIL
    return report


# -- instances for the lemma checks -----------------------------------------

def random_contraction(n: int, rng: np.random.Generator, degree: int = 4,
                       target: float = 0.9) -> TruncatedSeries:
    """Random complex polynomial scaled so its sampled sup on the unit torus
    (about 10**4 points, which bounds the polydisk sup by the maximum
    principle up to sampling error) equals ``target``."""
    terms = {}
    for k in range(degree + 1):
        for alpha in enumerate_degree(n, k):
            terms[alpha] = complex(rng.normal(), rng.normal()) / (k + 1)
    f = TruncatedSeries.polynomial(n, terms, K=degree)
    m = max(2, int(round(1e4 ** (1.0 / n))))
    theta = 2 * np.pi * np.arange(m) / m
    axes = np.meshgrid(*([np.exp(1j * theta)] * n), indexing="ij")
    pts = np.stack([ax.ravel() for ax in axes], axis=1)
    exps = f.table.exps
    vals = np.ones((len(pts), len(exps)), dtype=np.complex128)
    for j in range(n):
        vals *= pts[:, j:j + 1] ** exps[:, j]
    sup = float(np.abs(vals @ f.coeffs).max())
    return f * (target / sup)


def random_contractions(n: int, count: int = 10, seed: int | None = None,
                        degree: int = 4) -> list[TruncatedSeries]:
    rng = np.random.default_rng(default_seed() if seed is None else seed)
    return [random_contraction(n, rng, degree) for _ in range(count)]


EXTREMAL_A = (0.0, 0.3, 0.7, 0.95)
# truncation per dimension: long enough that tails at |z|_inf = 0.9 are negligible
EXTREMAL_K = {1: 200, 2: 60, 3: 40}


def extremal_instances(n: int, K: int | None = None) -> list[tuple[str, TruncatedSeries]]:
    """Extremal functions rescaled to the unit polydisk, labelled."""
    K = EXTREMAL_K.get(n, 30) if K is None else K
    out = []
    for a in EXTREMAL_A:
        for form in FORMS:
            w = ExtremalFunction(a, form, n)
            out.append((f"extremal a={a:g} {form}", to_series(w, K, unit=True)))
    return out


# -- lemma checks ------------------------------------------------------------

def check_coefficients(f: TruncatedSeries, n: int | None = None,
                       label: str = "") -> VerificationReport:
    """Odd-degree and even-degree coefficient bounds for functions bounded by 1
    on the unit polydisk, one record per degree ``2k+1`` or ``2k`` up to ``K``
    (the record's ``N`` field holds that degree)."""
    n = f.n if n is None else n
    report = VerificationReport("lemma4", "lemma", {"n": n, "K": f.K, "instance": label})
    ones = np.ones(f.n)
    abs_sums = degree_majorants(f, ones)
    sq = degree_square_sums(f)
    a0 = abs(f.coeffs[0])
    for d in range(1, f.K + 1):
        k = d // 2
        if d % 2:
            bound = n ** (d / 2) * (1 - sq[:k + 1].sum())
        else:
            bound = n ** k * (1 - sq[:k].sum() - sq[k] / (1 + a0))
        lhs = float(abs_sums[d])
        slack = 8 * EPS * (lhs + n ** (d / 2))
        report.records.append(Record("lemma4", "lemma", n, d, a0, None, 1.0, lhs, float(bound),
                                     slack, _inequality_verdict(lhs, slack, float(bound),
                                                                EQUALITY_TOL)))
    report.verdict = combine_verdicts(r.verdict for r in report.records)
    return report


def check_schwarz_pick(f: TruncatedSeries, samples: int = 200, seed: int | None = None,
                       radius: float = 0.9, points=None, label: str = "") -> VerificationReport:
    """``|f(z)| <= (|f(0)| + |z|_inf) / (1 + |f(0)| |z|_inf)`` at seeded points."""
    rng = np.random.default_rng(default_seed() if seed is None else seed)
    report = VerificationReport("lemma1", "lemma", {"n": f.n, "samples": samples,
                                                    "instance": label})
    if points is None:
        mod = rng.uniform(0.0, radius, size=(samples, f.n))
        arg = rng.uniform(0.0, 2 * np.pi, size=(samples, f.n))
        points = mod * np.exp(1j * arg)
    c0 = abs(f.coeffs[0])
    for z in np.atleast_2d(points):
        v, e = evaluate(f, z)
        m = float(np.max(np.abs(z)))
        bound = (c0 + m) / (1 + c0 * m)
        report.records.append(Record("lemma1", "lemma", f.n, None, c0, None, m, abs(v), bound, e,
                                     _inequality_verdict(abs(v), e, bound, EQUALITY_TOL)))
    report.verdict = combine_verdicts(r.verdict for r in report.records)
    return report


def _derivative_tail(f: TruncatedSeries, k: int, rho: float) -> float:
    """Bound on ``sum_{|g|>K} |a_g| C(g, beta) rho**(|g|-k)`` over every
    ``beta`` of order ``k``, using ``C(g, beta) <= C(|g|, k)``."""
    tail = f.tail
    if tail.kind == "none":
        return math.inf
    if tail.scale == 0.0:
        return 0.0
    q = tail.decay * f.n  # degree-j absolute sums at unit radius are <= scale * q**j
    if q * rho >= 1.0:
        return math.inf
    total = 0.0
    j = f.K + 1
    term = math.comb(j, k) * q ** j * rho ** (j - k)
    while True:
        ratio = (j + 1) / (j + 1 - k) * q * rho
        if ratio < 1.0:
            nxt = term * ratio
            if nxt / (1.0 - ratio) <= 1e-18 * max(total + term, 1e-300):
                return tail.scale * (total + term + nxt / (1.0 - ratio))
        total += term
        term *= ratio
        j += 1


def check_derivative_bound(f: TruncatedSeries, beta: MultiIndex, z, label: str = "",
                           shifted: TruncatedSeries | None = None) -> Record:
    """``|d^beta f(z)| <= beta! (1 - |f(z)|**2) / (1 - |z|_inf**2)**|beta|
    * (1 + |z|_inf)**(|beta| - N_beta)`` with ``N_beta`` the count of nonzero
    entries; PASS by definition for ``beta = 0``.  ``shifted`` may carry a
    precomputed :func:`taylor_coefficients` of ``f`` at ``z``."""
    beta = validate(beta)
    z = np.asarray(z, dtype=np.complex128)
    m = float(np.max(np.abs(z)))
    if m >= 1.0:
        raise ValueError("need |z|_inf < 1")
    order = sum(beta)
    if order > f.K:
        raise ValueError(f"derivative order {order} exceeds truncation degree {f.K}")
    if order == 0:
        return Record("lemma2", "lemma", f.n, 0, None, None, m, 0.0, 0.0, 0.0, PASS)
    if shifted is None:
        shifted = taylor_coefficients(f, z)
    bf = alpha_factorial(beta)
    lhs = abs(shifted.coefficient(beta)) * bf
    # each shifted coefficient is a sum of |gamma|-chains of at most n*K steps
    sums = degree_majorants(f, np.ones(f.n))
    size = math.fsum(float(sums[j]) * math.comb(j, order) * m ** (j - order)
                     for j in range(order, f.K + 1))
    rounding = 4 * (f.n * f.K + 1) * EPS * bf * size
    lhs_err = bf * _derivative_tail(f, order, m) + rounding
    v, e = evaluate(f, z)
    fz_hi = min(abs(v) + e, 1.0)
    nb = sum(1 for b in beta if b)
    rhs = bf * (1 - fz_hi ** 2) / (1 - m * m) ** order * (1 + m) ** (order - nb)
    return Record("lemma2", "lemma", f.n, order, None, None, m, lhs, rhs, lhs_err,
                  _inequality_verdict(lhs, lhs_err, rhs, EQUALITY_TOL))


def check_derivative_bounds(f: TruncatedSeries, max_order: int = 3, samples: int = 5,
                            seed: int | None = None, radius: float = 0.5,
                            label: str = "") -> VerificationReport:
    """:func:`check_derivative_bound` for every ``beta`` up to ``max_order`` at
    ``z = 0`` and at seeded random points with ``|z|_inf <= radius``."""
    rng = np.random.default_rng(default_seed() if seed is None else seed)
    report = VerificationReport("lemma2", "lemma", {"n": f.n, "samples": samples,
                                                    "instance": label})
    mod = rng.uniform(0.0, radius, size=(samples, f.n))
    arg = rng.uniform(0.0, 2 * np.pi, size=(samples, f.n))
    points = [np.zeros(f.n)] + list(mod * np.exp(1j * arg))
    for z in points:
        shifted = taylor_coefficients(f, z)
        for k in range(1, min(max_order, f.K) + 1):
            for beta in enumerate_degree(f.n, k):
                report.records.append(check_derivative_bound(f, beta, z, label, shifted))
    report.verdict = combine_verdicts(r.verdict for r in report.records)
    return report


def check_refined_bound(f: TruncatedSeries, N: int, xs=(0.1, 0.3, 0.5, 0.7),
                        label: str = "") -> VerificationReport:
    """``refined_sum <= (1 - |a_0|**2) x**N / (1 - x)`` at diagonal points
    ``x = n * rb`` for ``f`` bounded by 1 on the unit polydisk."""
    report = VerificationReport("lemma5", "lemma", {"n": f.n, "N": N, "instance": label})
    a0 = abs(f.coeffs[0])
    for x in xs:
        fv = refined_sum(f, EvalContext.diagonal(f.n, x, N))
        bound = (1 - a0 * a0) * x ** N / (1 - x)
        report.records.append(Record("lemma5", "lemma", f.n, N, a0, None, x, fv.value, bound,
                                     fv.truncation_error,
                                     _inequality_verdict(fv.value, fv.truncation_error, bound,
                                                         EQUALITY_TOL)))
    report.verdict = combine_verdicts(r.verdict for r in report.records)
    return report


def check_lemma(tag: str, n: int, N: int = 1, seed: int | None = None,
                count: int = 10) -> list[VerificationReport]:
    """Run one lemma check on ``count`` random contractions and on every
    rescaled extremal instance of dimension ``n``."""
    if tag not in LEMMAS:
        raise UnknownTheoremError(f"unknown lemma tag {tag!r}")
    seed = default_seed() if seed is None else seed
    instances = [(f"random #{i}", f) for i, f in
                 enumerate(random_contractions(n, count, seed))]
    instances += extremal_instances(n)
    reports = []
    for i, (label, f) in enumerate(instances):
        if tag == "lemma4":
            reports.append(check_coefficients(f, label=label))
        elif tag == "lemma5":
            reports.append(check_refined_bound(f, N, label=label))
        elif tag == "lemma1":
            reports.append(check_schwarz_pick(f, seed=seed + i, label=label))
        else:
            reports.append(check_derivative_bounds(f, seed=seed + i, label=label))
    return reports


# -- serialization -----------------------------------------------------------

FIELDS = ("theorem", "mode", "n", "N", "a0", "a", "x", "value", "bound", "tail", "verdict")


def record_row(rec: Record) -> dict:
    return {k: getattr(rec, k) for k in FIELDS}


def record_json(rec: Record) -> str:
    return json.dumps(record_row(rec), allow_nan=True)
