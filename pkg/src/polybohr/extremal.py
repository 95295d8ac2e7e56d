"""Moebius-of-a-linear-form functions ``g(z_1 + ... + z_n)`` and their exact data.

The one-variable profile is

* minus-form: ``g(s) = (a - s) / (1 - a s)``, coefficients ``c_0 = a``,
  ``c_k = -(1 - a**2) a**(k-1)``;
* plus-form: ``g(s) = (a + s) / (1 + a s)``, coefficients ``c_0 = a``,
  ``c_k = (1 - a**2) (-a)**(k-1)``.

Composed with ``s = z_1 + ... + z_n`` this is bounded by 1 on the polydisk of
polyradius ``1/n``; the coefficient at ``alpha`` is ``c_|alpha| * |alpha|!/alpha!``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .multiindex import index_table
from .series import TailBound, TruncatedSeries

FORMS = ("minus", "plus")


class DomainError(ValueError):
    pass


@dataclass(frozen=True)
class ExtremalFunction:
    a: float
    form: str = "minus"
    n: int = 1

    def __post_init__(self):
        if not (0.0 <= self.a < 1.0):
            raise ValueError(f"parameter a must lie in [0, 1), got {self.a}")
        if self.form not in FORMS:
            raise ValueError(f"form must be one of {FORMS}, got {self.form!r}")
        if self.n < 1:
            raise ValueError("dimension n must be >= 1")

    @property
    def sigma(self) -> int:
        """+1 for the plus-form, -1 for the minus-form."""
        return 1 if self.form == "plus" else -1

    def profile(self, s: complex) -> complex:
        return (self.a + self.sigma * s) / (1 + self.sigma * self.a * s)

    def profile_derivative(self, k: int, s: complex) -> complex:
        """``g^(k)(s)``; ``k = 0`` gives ``g(s)``."""
        if k == 0:
            return self.profile(s)
        return math.factorial(k) * coefficient(self, k) / (1 + self.sigma * self.a * s) ** (k + 1)

    def tail(self, unit: bool = False, K: int = 0) -> TailBound:
        """Geometric majorant tail past degree ``K``; ``unit`` for the rescaled
        ``w -> f(w/n)``.  For ``a = 0`` the profile is linear, so the tail is
        exact once ``K >= 1``."""
        a = self.a
        if a == 0.0 and K >= 1:
            return TailBound.exact()
        if a == 0.0:
            decay, scale = 1.0, 1.0
        else:
            decay, scale = a, (1 - a * a) / a
        if unit:
            decay /= self.n
        return TailBound("geometric", decay, scale)


def coefficient(w: ExtremalFunction, k: int) -> float:
    if k == 0:
        return w.a
    # -0.0 would leak into dumps for a = 0
    return -(1 - w.a ** 2) * (-w.sigma) ** k * w.a ** (k - 1) + 0.0


def profile_coefficients(w: ExtremalFunction, K: int) -> np.ndarray:
    """``c_0 .. c_K`` of the one-variable profile."""
    if K < 0:
        raise ValueError("K must be >= 0")
    return np.array([coefficient(w, k) for k in range(K + 1)], dtype=np.float64)


def to_series(w: ExtremalFunction, K: int, unit: bool = False) -> TruncatedSeries:
    """Expansion in ``z_1..z_n`` up to total degree ``K``.

    With ``unit=True`` the series of ``w -> f(w/n)`` is returned instead; it is
    bounded by 1 on the unit polydisk.
    """
    table = index_table(w.n, K)
    c = profile_coefficients(w, K)
    if unit:
        c = c / float(w.n) ** np.arange(K + 1)
    coeffs = c[table.degrees] * table.multinomials
    return TruncatedSeries(w.n, K, coeffs.astype(np.complex128), w.tail(unit, K))


@dataclass(frozen=True)
class ClosedValues:
    """Exact values of the extremal function at ``z = (pm r, ..., pm r)``."""

    w: ExtremalFunction
    s: float

    @property
    def value(self) -> float:
        return float(self.w.profile(self.s).real)

    @property
    def df_value(self) -> float:
        """Euler derivative ``s g'(s)``."""
        return float(self.s * self.w.profile_derivative(1, self.s).real)

    def kth_derivative(self, k: int) -> float:
        """``g^(k)(s)``, equal to every ``d^beta f(z)`` with ``|beta| = k``."""
        return float(self.w.profile_derivative(k, self.s).real)


def closed_eval(w: ExtremalFunction, r: float, point_sign: int = 1) -> ClosedValues:
    if point_sign not in (1, -1):
        raise ValueError("point_sign must be +1 or -1")
    if r < 0:
        raise DomainError("r must be nonnegative")
    x = w.n * r
    if x >= 1.0:
        raise DomainError(f"n*r = {x} must be < 1")
    return ClosedValues(w, point_sign * x)
