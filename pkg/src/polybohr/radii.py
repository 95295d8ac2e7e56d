"""Radius equations in ``x = n * rb`` and certified root brackets.

Root families are solved for their smallest root in ``(0, 1)`` by a scan with
step ``1e-3`` followed by bisection.  A sign is trusted only when the value
exceeds ``4 * eps * sum_i |c_i| x**i``.  Closed families return a width-0
certificate at the closed value together with the residual of the quadratic
they solve.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Polynomial as P

EPS = float(np.finfo(float).eps)
SCAN_STEP = 1e-3
SWEEP_STEP = 1e-4
MIN_TOL = 1e-14


class NoRootError(ArithmeticError):
    pass


class Family(enum.Enum):
    PSI_N = "psi"
    PSI_PRIME_N = "psi-prime"
    R_A0_CLOSED = "r-a0"
    CUBIC_A0 = "cubic"
    SQRT17_CLOSED = "sqrt17"
    QUARTIC = "quartic"
    TILDE_N = "tilde"
    TILDE_PRIME_N = "tilde-prime"

    @classmethod
    def parse(cls, text: str) -> "Family":
        key = text.strip().lower().replace("_", "-")
        for fam in cls:
            if key in (fam.value, fam.name.lower().replace("_", "-")):
                return fam
        raise ValueError(f"unknown family {text!r}; expected one of "
                         f"{[f.value for f in cls]}")


NEEDS_N = {Family.PSI_N, Family.PSI_PRIME_N, Family.TILDE_N, Family.TILDE_PRIME_N}
NEEDS_A0 = {Family.R_A0_CLOSED, Family.CUBIC_A0}
CLOSED = {Family.R_A0_CLOSED, Family.SQRT17_CLOSED}
CUBIC_VARIANTS = ("statement", "proof")

X = P([0.0, 1.0])


@dataclass(frozen=True)
class RadiusEquation:
    """One radius equation.  ``variant`` selects the cubic's leading factor:
    ``"statement"`` uses ``1 - a0**3`` and ``"proof"`` uses ``1 - a0**2``."""

    family: Family
    N: int | None = None
    a0: float | None = None
    variant: str = "statement"

    def __post_init__(self):
        fam = self.family
        if isinstance(fam, str):
            fam = Family.parse(fam)
            object.__setattr__(self, "family", fam)
        if (self.N is not None) != (fam in NEEDS_N):
            raise ValueError(f"{fam.name} {'needs' if fam in NEEDS_N else 'takes no'} N")
        if (self.a0 is not None) != (fam in NEEDS_A0):
            raise ValueError(f"{fam.name} {'needs' if fam in NEEDS_A0 else 'takes no'} a0")
        if self.N is not None and self.N < 1:
            raise ValueError("N must be >= 1")
        if self.a0 is not None and not (0.0 <= self.a0 < 1.0):
            raise ValueError("a0 must lie in [0, 1)")
        if self.variant not in CUBIC_VARIANTS:
            raise ValueError(f"variant must be one of {CUBIC_VARIANTS}")

    @property
    def is_closed(self) -> bool:
        return self.family in CLOSED

    def polynomial(self) -> P:
        """Defining polynomial in ``x``; for closed families the quadratic whose
        smallest positive root is the closed value."""
        fam, N, a0 = self.family, self.N, self.a0
        if fam is Family.PSI_N:
            return 2 * (1 + X) * X ** N - (1 - X) ** 2
        if fam is Family.PSI_PRIME_N:
            return (1 + X) * X ** N - (1 - X) ** 2
        if fam is Family.R_A0_CLOSED:
            return P([1.0, -(3 + a0), 1 - a0 - a0 * a0])
        if fam is Family.CUBIC_A0:
            lead = 1 - a0 ** 3 if self.variant == "statement" else 1 - a0 ** 2
            return P([1.0, -2.0, -(1 + 2 * a0), lead])
        if fam is Family.SQRT17_CLOSED:
            return P([-1.0, 3.0, 2.0])
        if fam is Family.QUARTIC:
            return P([1.0, -2.0, -1.0, -1.0, -1.0])
        base = (1 + X) * (1 - 2 * X) * (1 - X) ** (N - 1)
        if fam is Family.TILDE_N:
            return base - 2 * X ** N
        return base - X ** N

    def closed_value(self) -> float:
        if self.family is Family.R_A0_CLOSED:
            a0 = self.a0
            return 2.0 / (3.0 + a0 + math.sqrt(5.0) * (1.0 + a0))
        if self.family is Family.SQRT17_CLOSED:
            return (math.sqrt(17.0) - 3.0) / 4.0
        raise ValueError(f"{self.family.name} has no closed form")

    def __call__(self, x: float) -> float:
        return float(self.polynomial()(x))

    def label(self) -> str:
        parts = [self.family.value]
        if self.N is not None:
            parts.append(f"N={self.N}")
        if self.a0 is not None:
            parts.append(f"a0={self.a0:g}")
        if self.family is Family.CUBIC_A0:
            parts.append(self.variant)
        return " ".join(parts)


def _signed(poly: P, x: float) -> tuple[float, int]:
    """Value and trusted sign (0 when inside the rounding band)."""
    c = poly.coef
    value = 0.0
    for ci in c[::-1]:
        value = value * x + ci
    powers = np.abs(x) ** np.arange(len(c))
    band = 4.0 * EPS * float(np.abs(c) @ powers)
    if abs(value) <= band:
        return value, 0
    return value, 1 if value > 0 else -1


@dataclass(frozen=True)
class RootCertificate:
    equation: RadiusEquation
    x_low: float
    x_high: float
    sign_low: int
    sign_high: int
    residual: float = 0.0

    @property
    def width(self) -> float:
        return self.x_high - self.x_low

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.x_low + self.x_high)

    @property
    def residual_signs(self) -> tuple[int, int]:
        return self.sign_low, self.sign_high

    def is_valid(self) -> bool:
        """Opposite trusted signs at both ends, re-evaluated from scratch.

        Width-0 certificates of closed families are checked on the bracket
        ``value * (1 -+ 1e-12)`` of their defining polynomial.
        """
        poly = self.equation.polynomial()
        lo, hi = self.x_low, self.x_high
        if self.width == 0.0:
            lo, hi = lo * (1 - 1e-12), hi * (1 + 1e-12)
        s_lo, s_hi = _signed(poly, lo)[1], _signed(poly, hi)[1]
        return s_lo * s_hi == -1


def solve(eq: RadiusEquation, tol: float = 1e-13) -> RootCertificate:
    """Smallest root of ``eq`` in ``(0, 1)`` with a bracket of width at most ``tol``."""
    if tol < MIN_TOL:
        raise ValueError(f"tolerance must be >= {MIN_TOL}")
    poly = eq.polynomial()
    if eq.is_closed:
        x = eq.closed_value()
        s = _signed(poly, x)
        return RootCertificate(eq, x, x, s[1], s[1], residual=s[0])
    lo, s_lo = None, 0
    steps = int(round(1.0 / SCAN_STEP))
    for i in range(1, steps):
        x = i * SCAN_STEP
        s = _signed(poly, x)[1]
        if s == 0:
            continue
        if s_lo != 0 and s != s_lo:
            return _bisect(eq, poly, lo, x, s_lo, s, tol)
        lo, s_lo = x, s
    raise NoRootError(f"no sign change of {eq.label()} in (0, 1)")


def _bisect(eq, poly, lo, hi, s_lo, s_hi, tol) -> RootCertificate:
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        s = _signed(poly, mid)[1]
        if s == 0:
            # rounding band reached: shrink from both sides to trusted points
            lo, hi = _tighten(poly, lo, hi, mid, s_lo, s_hi)
            break
        if s == s_lo:
            lo = mid
        else:
            hi = mid
    return RootCertificate(eq, lo, hi, s_lo, s_hi)


def _tighten(poly, lo, hi, mid, s_lo, s_hi):
    step = (hi - lo) / 4
    while step > 0 and step > EPS * mid:
        left, right = mid - step, mid + step
        if _signed(poly, left)[1] == s_lo:
            lo = left
        if _signed(poly, right)[1] == s_hi:
            hi = right
        step /= 2
    return lo, hi


def minimality_sweep(eq: RadiusEquation, cert: RootCertificate,
                     step: float = SWEEP_STEP) -> bool:
    """True when no trusted sign change occurs on ``(0, x_low)`` at the given step."""
    poly = eq.polynomial()
    xs = np.arange(1, int(cert.x_low / step) + 1) * step
    xs = xs[xs < cert.x_low]
    c = poly.coef
    values = np.polynomial.polynomial.polyval(xs, c)
    band = 4.0 * EPS * np.polynomial.polynomial.polyval(xs, np.abs(c))
    signs = np.where(np.abs(values) > band, np.sign(values), 0).astype(int)
    signs = signs[signs != 0]
    if signs.size == 0:
        return True
    if np.any(signs != signs[0]):
        return False
    return cert.width == 0.0 or int(signs[0]) == cert.sign_low


def radius_in_r(eq: RadiusEquation, n: int, tol: float = 1e-13) -> float:
    """Root in terms of the polyradius scalar ``rb = x / n``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return solve(eq, tol).midpoint / n
