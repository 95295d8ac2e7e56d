"""Bohr-type functionals of a power series at a point of the polydisk.

Every functional accepts either a :class:`TruncatedSeries` (series path) or an
:class:`ExtremalFunction` (exact diagonal path).  The exact path needs a
diagonal point ``z = (pm r, ..., pm r)`` and uses the closed profile together
with ``sum_{|alpha|=k} |alpha|!/alpha! = n**k`` and the square sums ``S_n(k)``.

Notation: ``z`` is the point, ``r = |z|`` its polyradius, ``rb = max r`` (the
scalar in the ``1 - rb`` denominators), ``N`` the cutoff degree and
``t = (N - 1) // 2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .extremal import ExtremalFunction, closed_eval, coefficient
from .multiindex import multinomial_square_sum
from .series import (
    EPS, TruncatedSeries, degree_majorants, degree_square_sums, evaluate,
    radial_derivative, taylor_coefficients,
)

FUNCTIONALS = ("A1", "A2", "A3", "A4", "I", "J", "M", "N")


@dataclass(frozen=True)
class FunctionalValue:
    """``value`` is the sum of ``breakdown``; ``truncation_error`` bounds the
    distance to the untruncated functional (``inf`` when uncertified)."""

    value: float
    truncation_error: float
    breakdown: dict = field(default_factory=dict)

    @classmethod
    def from_parts(cls, parts: dict, error: float) -> "FunctionalValue":
        return cls(math.fsum(parts.values()), error, dict(parts))

    def __add__(self, other: "FunctionalValue") -> "FunctionalValue":
        parts = dict(self.breakdown)
        for key, v in other.breakdown.items():
            parts[key] = parts.get(key, 0.0) + v
        return FunctionalValue.from_parts(parts, self.truncation_error + other.truncation_error)

    @property
    def upper(self) -> float:
        return self.value + self.truncation_error

    @property
    def lower(self) -> float:
        return self.value - self.truncation_error


@dataclass(frozen=True)
class EvalContext:
    z: np.ndarray
    N: int = 1

    def __post_init__(self):
        z = np.atleast_1d(np.asarray(self.z, dtype=np.complex128)).copy()
        z.setflags(write=False)
        object.__setattr__(self, "z", z)
        if self.N < 1:
            raise ValueError("cutoff N must be >= 1")
        if self.rb >= 1.0:
            raise ValueError(f"max |z_j| = {self.rb} must be < 1")

    @classmethod
    def diagonal(cls, n: int, x: float, N: int = 1, point_sign: int = 1) -> "EvalContext":
        """Point ``(pm x/n, ..., pm x/n)``."""
        if point_sign not in (1, -1):
            raise ValueError("point_sign must be +1 or -1")
        return cls(np.full(n, point_sign * x / n), N)

    @property
    def n(self) -> int:
        return len(self.z)

    @property
    def r(self) -> np.ndarray:
        return np.abs(self.z)

    @property
    def rb(self) -> float:
        return float(np.max(np.abs(self.z)))

    @property
    def t(self) -> int:
        return (self.N - 1) // 2

    def with_N(self, N: int) -> "EvalContext":
        return EvalContext(self.z, N)

    def diagonal_point(self) -> tuple[int, float] | None:
        """``(point_sign, x)`` when ``z`` is a real diagonal point, else None."""
        z0 = self.z[0]
        if np.any(self.z.imag != 0) or np.any(self.z != z0):
            return None
        return (1 if z0.real >= 0 else -1), abs(z0.real) * self.n


def _check_dim(f, ctx: EvalContext):
    if f.n != ctx.n:
        raise ValueError(f"series has dimension {f.n}, point has dimension {ctx.n}")


def _slack(K: int, M: int, magnitude: float) -> float:
    return (K + M - 1) * EPS * magnitude


def _square_error(m: float, e: float) -> float:
    return 2.0 * m * e + e * e


# -- series path -------------------------------------------------------------

def _modulus(f: TruncatedSeries, ctx: EvalContext) -> tuple[float, float]:
    v, e = evaluate(f, ctx.z)
    return abs(v), e


def _majorant(f: TruncatedSeries, r, N: int) -> tuple[float, float]:
    sums = degree_majorants(f, r)
    part = sums[N:] if N <= f.K else sums[:0]
    value = float(part.sum())
    tail = f.tail.majorant_tail(max(f.K, N - 1), r)
    return value, tail + _slack(f.K, len(f.coeffs), value)


def majorant_sum(f, r, N: int = 0) -> FunctionalValue:
    """``sum_{k>=N} sum_{|alpha|=k} |a_alpha| r**alpha``."""
    r = np.abs(np.atleast_1d(np.asarray(r, dtype=np.complex128)))
    if isinstance(f, ExtremalFunction):
        ctx = EvalContext(r, max(N, 1))
        sign_x = ctx.diagonal_point()
        if sign_x is None:
            raise ValueError("the exact path needs equal radii")
        return FunctionalValue.from_parts({"majorant": _exact_majorant(f, sign_x[1], N)}, 0.0)
    if len(r) != f.n:
        raise ValueError(f"series has dimension {f.n}, radius has dimension {len(r)}")
    if np.any(r >= 1.0):
        raise ValueError("radii must be < 1")
    value, err = _majorant(f, r, N)
    return FunctionalValue.from_parts({"majorant": value}, err)


def _refined_series(f: TruncatedSeries, ctx: EvalContext) -> FunctionalValue:
    r, rb, N, t = ctx.r, ctx.rb, ctx.N, ctx.t
    maj, maj_err = _majorant(f, r, N)
    a0 = abs(f.coeffs[0])
    w_sgn = rb ** N / (1.0 - rb)
    w_quad = 1.0 / (1.0 + a0) + rb / (1.0 - rb)
    plain = degree_square_sums(f)
    weighted = degree_square_sums(f, r)
    sgn = 0.0
    sgn_err = 0.0
    if t >= 1:
        head = float(plain[1:t + 1].sum())
        missing = 0.0
        for k in range(f.K + 1, t + 1):
            missing += f.tail.degree_bound(k, np.ones(f.n)) ** 2
        sgn = w_sgn * head
        sgn_err = w_sgn * (missing + _slack(f.K, len(f.coeffs), head))
    quad_sum = float(weighted[t + 1:].sum())
    quad = w_quad * quad_sum
    quad_err = w_quad * (f.tail.majorant_tail(max(f.K, t), r, "square")
                         + _slack(f.K, len(f.coeffs), quad_sum))
    return FunctionalValue.from_parts(
        {"majorant": maj, "sgn_quadratic": sgn, "quadratic": quad},
        maj_err + sgn_err + quad_err)


def _derivative_series(f: TruncatedSeries, ctx: EvalContext) -> tuple[float, float]:
    v, _ = evaluate(radial_derivative(f), ctx.z)
    tail = f.tail.majorant_tail(f.K, ctx.r, "degree")
    return abs(v), tail + _slack(f.K, len(f.coeffs), abs(v))


def _shifted_majorant(f: TruncatedSeries, ctx: EvalContext) -> tuple[float, float]:
    """``sum_{k>=N} sum_{|alpha|=k} |d^alpha f(z)|/alpha! |z|**alpha``.

    Dropping the degrees above ``K`` of ``f`` perturbs the shifted coefficients
    by at most ``sum_{|g|>K} |a_g| (2|z|)**g``, which the geometric tail bounds.
    """
    shifted = taylor_coefficients(f, ctx.z)
    value, _ = _majorant(shifted, ctx.r, ctx.N)
    tail = f.tail.majorant_tail(f.K, 2.0 * ctx.r)
    return value, tail + _slack(f.K, len(f.coeffs), value)


# -- exact diagonal path -----------------------------------------------------

def _diag(w: ExtremalFunction, ctx: EvalContext) -> tuple[int, float]:
    _check_dim(w, ctx)
    sign_x = ctx.diagonal_point()
    if sign_x is None:
        raise ValueError("the exact path needs a real diagonal point")
    return sign_x


def _exact_majorant(w: ExtremalFunction, x: float, N: int) -> float:
    a = w.a
    out = a if N <= 0 else 0.0
    N1 = max(N, 1)
    # |c_k| = (1 - a^2) a^(k-1); sum over k >= N1 of |c_k| x^k
    return out + (1 - a * a) * a ** (N1 - 1) * x ** N1 / (1 - a * x)


def _normalized_square_sum(n: int, k: int) -> float:
    """``S_n(k) / n**(2k)``, the diagonal weight of ``|c_k|**2 x**(2k)``."""
    return multinomial_square_sum(n, k) / n ** (2 * k)


def _exact_quadratic(w: ExtremalFunction, x: float, start: int) -> tuple[float, float]:
    """``sum_{k>=start} |c_k|**2 S_n(k) (x/n)**(2k)`` and its remainder bound."""
    a = w.a
    if a == 0.0:
        return (_normalized_square_sum(w.n, 1) * x * x if start <= 1 else 0.0), 0.0
    total = 0.0
    k = max(start, 1)
    scale = (1 - a * a) ** 2 / (a * a)
    q = (a * x) ** 2
    while True:
        total += coefficient(w, k) ** 2 * _normalized_square_sum(w.n, k) * x ** (2 * k)
        # S_n(k) <= n^(2k): later terms are below scale * q^k
        rest = scale * q ** (k + 1) / (1 - q)
        if rest <= 1e-18 * max(total, 1e-300) or k >= 20000:
            return total, rest
        k += 1


def _refined_exact(w: ExtremalFunction, ctx: EvalContext) -> FunctionalValue:
    _, x = _diag(w, ctx)
    rb, N, t = ctx.rb, ctx.N, ctx.t
    maj = _exact_majorant(w, x, N)
    sgn = 0.0
    if t >= 1:
        head = math.fsum(coefficient(w, k) ** 2 * multinomial_square_sum(w.n, k)
                         for k in range(1, t + 1))
        sgn = head * rb ** N / (1 - rb)
    quad_sum, rest = _exact_quadratic(w, x, t + 1)
    weight = 1.0 / (1.0 + w.a) + rb / (1.0 - rb)
    return FunctionalValue.from_parts(
        {"majorant": maj, "sgn_quadratic": sgn, "quadratic": weight * quad_sum},
        weight * rest)


def _shifted_exact(w: ExtremalFunction, s: float, x: float, N: int) -> float:
    """``sum_{k>=N} |g^(k)(s)| x**k / k!`` in closed form."""
    a = w.a
    u = 1 + w.sigma * a * s
    if a * x >= u:
        return math.inf
    return (1 - a * a) * a ** (N - 1) * x ** N / (u ** N * (u - a * x))


# -- public functionals ------------------------------------------------------

def refined_sum(f, ctx: EvalContext) -> FunctionalValue:
    """Majorant sum from ``N`` plus the two squared-coefficient groups:
    ``sgn(t) rb**N/(1-rb) sum_{1<=k<=t} sum |a_alpha|**2`` and
    ``(1/(1+|a_0|) + rb/(1-rb)) sum_{k>t} sum |a_alpha|**2 r**(2 alpha)``."""
    if isinstance(f, ExtremalFunction):
        return _refined_exact(f, ctx)
    _check_dim(f, ctx)
    return _refined_series(f, ctx)


def _modulus_part(f, ctx: EvalContext, squared: bool) -> FunctionalValue:
    if isinstance(f, ExtremalFunction):
        sign, x = _diag(f, ctx)
        m, e = abs(closed_eval(f, x / f.n, sign).value), 0.0
    else:
        _check_dim(f, ctx)
        m, e = _modulus(f, ctx)
    if squared:
        return FunctionalValue.from_parts({"modulus": m * m}, _square_error(m, e))
    return FunctionalValue.from_parts({"modulus": m}, e)


def _derivative_part(f, ctx: EvalContext) -> FunctionalValue:
    if isinstance(f, ExtremalFunction):
        sign, x = _diag(f, ctx)
        d, e = abs(closed_eval(f, x / f.n, sign).df_value), 0.0
    else:
        d, e = _derivative_series(f, ctx)
    return FunctionalValue.from_parts({"derivative": d}, e)


def functional_A1(f, ctx: EvalContext) -> FunctionalValue:
    """``|f(z)| + refined_sum``."""
    return _modulus_part(f, ctx, False) + refined_sum(f, ctx)


def functional_A2(f, ctx: EvalContext) -> FunctionalValue:
    """``|f(z)|**2 + refined_sum``."""
    return _modulus_part(f, ctx, True) + refined_sum(f, ctx)


def functional_A3(f, ctx: EvalContext) -> FunctionalValue:
    """:func:`functional_A1` with ``N = 1``."""
    return functional_A1(f, ctx.with_N(1))


def functional_A4(f, ctx: EvalContext) -> FunctionalValue:
    """:func:`functional_A2` with ``N = 1``."""
    return functional_A2(f, ctx.with_N(1))


def functional_I(f, ctx: EvalContext) -> FunctionalValue:
    """``|f(z)| + |Df(z)|`` plus the refined sum with ``N = 2``; ``ctx.N`` is ignored."""
    c2 = ctx.with_N(2)
    return _modulus_part(f, c2, False) + _derivative_part(f, c2) + refined_sum(f, c2)


def functional_J(f, ctx: EvalContext) -> FunctionalValue:
    """:func:`functional_I` with ``|f(z)|**2``."""
    c2 = ctx.with_N(2)
    return _modulus_part(f, c2, True) + _derivative_part(f, c2) + refined_sum(f, c2)


def _shifted_part(f, ctx: EvalContext) -> FunctionalValue:
    if isinstance(f, ExtremalFunction):
        sign, x = _diag(f, ctx)
        v, e = _shifted_exact(f, sign * x, x, ctx.N), 0.0
    else:
        _check_dim(f, ctx)
        v, e = _shifted_majorant(f, ctx)
    return FunctionalValue.from_parts({"derivative": v}, e)


def functional_M(f, ctx: EvalContext) -> FunctionalValue:
    """``|f(z)| + sum_{k>=N} sum_{|alpha|=k} |d^alpha f(z)|/alpha! |z|**alpha``."""
    return _modulus_part(f, ctx, False) + _shifted_part(f, ctx)


def functional_N(f, ctx: EvalContext) -> FunctionalValue:
    """:func:`functional_M` with ``|f(z)|**2``."""
    return _modulus_part(f, ctx, True) + _shifted_part(f, ctx)


_DISPATCH = {
    "A1": functional_A1, "A2": functional_A2, "A3": functional_A3, "A4": functional_A4,
    "I": functional_I, "J": functional_J, "M": functional_M, "N": functional_N,
}


def evaluate_functional(name: str, f, ctx: EvalContext) -> FunctionalValue:
    try:
        return _DISPATCH[name](f, ctx)
    except KeyError:
        raise ValueError(f"unknown functional {name!r}; expected one of {FUNCTIONALS}") from None


# -- one-variable profile expressions ---------------------------------------

def profile_functional(name: str, a: float, x: float, N: int = 1) -> float:
    """Closed one-variable values on the extremal family, as functions of ``x``.

    They agree with the exact path for ``n = 1``.  For ``n >= 2`` they replace
    every squared-coefficient group by its one-variable counterpart, which
    bounds the exact value from above (for ``M`` and ``N`` they are exact in
    every dimension).  Pairings: ``A1, A2`` minus-form at ``-x``; ``A3, A4, I,
    J`` plus-form at ``+x``; ``M, N`` minus-form at ``+x``.
    """
    b = 1 - a * a
    if name == "A1":
        return (a + x) / (1 + a * x) + b * x ** N / (1 - x)
    if name == "A2":
        return ((a + x) / (1 + a * x)) ** 2 + b * x ** N / (1 - x)
    if name == "A3":
        b3 = (1 - a - a * a) * x * x - (3 + a) * x + 1
        return 1 - (1 - a) * b3 / ((1 + a * x) * (1 - x))
    if name == "A4":
        return ((a + x) / (1 + a * x)) ** 2 + b * x / (1 - x)
    if name == "I":
        return (a + x) / (1 + a * x) + b * x / (1 + a * x) ** 2 + b * x * x / (1 - x)
    if name == "J":
        jt = -1 + 2 * x + x ** 2 - x ** 3 + 2 * x ** 3 * a + x ** 4 * a * a
        return 1 + b * jt / ((1 + a * x) ** 2 * (1 - x))
    if name in ("M", "N"):
        if 2 * a * x >= 1:
            return math.inf
        head = abs(a - x) / (1 - a * x)
        if name == "N":
            head *= head
        return head + b * a ** (N - 1) * x ** N / ((1 - a * x) ** N * (1 - 2 * a * x))
    raise ValueError(f"unknown functional {name!r}")
