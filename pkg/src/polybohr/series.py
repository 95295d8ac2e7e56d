"""Truncated multivariate power series on a graded-lexicographic index table.

A :class:`TruncatedSeries` stores one complex coefficient per row of
``index_table(n, K)``.  Every evaluation also returns a remainder bound: the
truncation tail certified by the attached :class:`TailBound` plus a rounding
allowance of ``(K + M - 1) * eps * sum|terms|`` for ``M`` stored terms.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

import numpy as np

from . import kernels
from .multiindex import IndexTable, MultiIndex, index_table, validate

EPS = float(np.finfo(float).eps)


class DimensionError(ValueError):
    pass


@dataclass(frozen=True)
class TailBound:
    """Majorant decay of the coefficients past the truncation degree.

    ``kind="geometric"`` certifies, for every polyradius ``rho`` and every
    degree ``k > K``, ``sum_{|alpha|=k} |a_alpha| rho**alpha <= scale * q**k``
    with ``q = decay * sum(rho)``.  ``scale = 0`` means the series is an exact
    polynomial.  ``kind="none"`` certifies nothing.
    """

    kind: str = "none"
    decay: float = 0.0
    scale: float = 0.0

    def __post_init__(self):
        if self.kind not in ("geometric", "none"):
            raise ValueError(f"unknown tail kind {self.kind!r}")
        if self.decay < 0 or self.scale < 0:
            raise ValueError("tail decay and scale must be nonnegative")

    @classmethod
    def exact(cls) -> "TailBound":
        return cls("geometric", 0.0, 0.0)

    @property
    def is_exact(self) -> bool:
        return self.kind == "geometric" and self.scale == 0.0

    def ratio(self, rho) -> float:
        return self.decay * float(np.sum(np.abs(rho)))

    def degree_bound(self, k: int, rho) -> float:
        """Bound on ``sum_{|alpha|=k} |a_alpha| rho**alpha`` for ``k > K``."""
        if self.kind == "none":
            return math.inf
        if self.scale == 0.0:
            return 0.0
        return self.scale * self.ratio(rho) ** k

    def majorant_tail(self, K: int, rho, weight=None) -> float:
        """Bound on ``sum_{k>K} w(k) sum_{|alpha|=k} |a_alpha| rho**alpha``.

        ``weight`` may be ``"degree"`` (w = k), ``"square"`` (the quadratic
        sums ``|a_alpha|**2 rho**(2 alpha)``, bounded by the squared degree
        majorants) or ``None`` (w = 1).
        """
        if self.kind == "none":
            return math.inf
        if self.scale == 0.0:
            return 0.0
        q = self.ratio(rho)
        if weight == "square":
            q2 = q * q
            if q2 >= 1.0:
                return math.inf
            return self.scale ** 2 * q2 ** (K + 1) / (1.0 - q2)
        if q >= 1.0:
            return math.inf
        head = q ** (K + 1)
        if weight == "degree":
            return self.scale * head * ((K + 1) - K * q) / (1.0 - q) ** 2
        return self.scale * head / (1.0 - q)


@dataclass(frozen=True, eq=False)
class TruncatedSeries:
    """Power series in ``n`` variables known up to total degree ``K``."""

    n: int
    K: int
    coeffs: np.ndarray
    tail: TailBound = field(default_factory=TailBound)

    def __post_init__(self):
        if self.n < 1 or self.K < 0:
            raise ValueError("need n >= 1 and K >= 0")
        coeffs = np.array(self.coeffs, dtype=np.complex128)
        if coeffs.shape != (len(self.table),):
            raise ValueError(
                f"expected {len(self.table)} coefficients for n={self.n}, K={self.K}, "
                f"got shape {coeffs.shape}")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    # -- construction --------------------------------------------------------

    @classmethod
    def zeros(cls, n: int, K: int, tail: TailBound | None = None) -> "TruncatedSeries":
        return cls(n, K, np.zeros(len(index_table(n, K))), tail or TailBound.exact())

    @classmethod
    def constant(cls, c: complex, n: int, K: int = 0) -> "TruncatedSeries":
        coeffs = np.zeros(len(index_table(n, K)), dtype=np.complex128)
        coeffs[0] = c
        return cls(n, K, coeffs, TailBound.exact())

    @classmethod
    def from_terms(cls, n: int, terms: Mapping[MultiIndex, complex], K: int | None = None,
                   tail: TailBound | None = None) -> "TruncatedSeries":
        """Series with the given coefficients; other indices are zero."""
        terms = {validate(a): complex(c) for a, c in terms.items()}
        for alpha in terms:
            if len(alpha) != n:
                raise DimensionError(f"index {alpha} does not have dimension {n}")
        top = max((sum(a) for a in terms), default=0)
        if K is None:
            K = top
        elif top > K:
            raise ValueError(f"term of degree {top} exceeds truncation degree {K}")
        table = index_table(n, K)
        coeffs = np.zeros(len(table), dtype=np.complex128)
        for alpha, c in terms.items():
            coeffs[table.index(alpha)] += c
        return cls(n, K, coeffs, tail or TailBound())

    @classmethod
    def polynomial(cls, n: int, terms: Mapping[MultiIndex, complex],
                   K: int | None = None) -> "TruncatedSeries":
        """Like :meth:`from_terms` but marked exact (zero tail)."""
        return cls.from_terms(n, terms, K, TailBound.exact())

    # -- accessors -----------------------------------------------------------

    @property
    def table(self) -> IndexTable:
        return index_table(self.n, self.K)

    def coefficient(self, alpha: MultiIndex) -> complex:
        alpha = validate(alpha)
        if len(alpha) != self.n:
            raise DimensionError(f"index {alpha} does not have dimension {self.n}")
        if sum(alpha) > self.K:
            return 0j
        return complex(self.coeffs[self.table.index(alpha)])

    def terms(self) -> Iterator[tuple[MultiIndex, complex]]:
        for alpha, c in zip(map(tuple, self.table.exps.tolist()), self.coeffs):
            yield alpha, complex(c)

    def homogeneous_part(self, k: int) -> list[tuple[MultiIndex, complex]]:
        return homogeneous_part(self, k)

    def evaluate(self, z) -> tuple[complex, float]:
        return evaluate(self, z)

    def with_tail(self, tail: TailBound) -> "TruncatedSeries":
        return TruncatedSeries(self.n, self.K, self.coeffs, tail)

    # -- arithmetic ----------------------------------------------------------

    def _combine_tail(self, other: "TruncatedSeries") -> TailBound:
        a, b = self.tail, other.tail
        if a.kind == "none" or b.kind == "none":
            return TailBound()
        if a.is_exact:
            return b
        if b.is_exact:
            return a
        return TailBound("geometric", max(a.decay, b.decay), a.scale + b.scale)

    def __add__(self, other):
        if isinstance(other, TruncatedSeries):
            if (other.n, other.K) != (self.n, self.K):
                raise DimensionError("series must share dimension and truncation degree")
            return TruncatedSeries(self.n, self.K, self.coeffs + other.coeffs,
                                   self._combine_tail(other))
        return self + TruncatedSeries.constant(other, self.n, self.K)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(self.n, self.K, -self.coeffs, self.tail)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        if isinstance(c, TruncatedSeries):
            return NotImplemented
        c = complex(c)
        tail = self.tail
        if tail.kind == "geometric":
            tail = TailBound("geometric", tail.decay, tail.scale * abs(c))
        return TruncatedSeries(self.n, self.K, self.coeffs * c, tail)

    __rmul__ = __mul__

    def __repr__(self):
        nz = int(np.count_nonzero(self.coeffs))
        return f"TruncatedSeries(n={self.n}, K={self.K}, nonzero={nz}, tail={self.tail})"


def _point(f: TruncatedSeries, z) -> np.ndarray:
    z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    if z.shape != (f.n,):
        raise DimensionError(f"point has shape {z.shape}, series has dimension {f.n}")
    return z


def rounding_slack(f: TruncatedSeries, magnitude: float) -> float:
    """First-order rounding allowance for a sum over all stored terms."""
    return (f.K + len(f.coeffs) - 1) * EPS * magnitude


def homogeneous_part(f: TruncatedSeries, k: int) -> list[tuple[MultiIndex, complex]]:
    """Nonzero coefficients of degree ``k`` in enumeration order."""
    if k < 0 or k > f.K:
        raise IndexError(f"degree {k} outside 0..{f.K}")
    block = f.table.block(k)
    exps = f.table.exps[block].tolist()
    return [(tuple(a), complex(c)) for a, c in zip(exps, f.coeffs[block]) if c != 0]


def evaluate(f: TruncatedSeries, z) -> tuple[complex, float]:
    """Truncated sum at ``z`` and a remainder bound (``inf`` without a tail)."""
    z = _point(f, z)
    table = f.table
    terms = f.coeffs * kernels.monomials(table.exps, z)
    value = complex(kernels.block_sums(terms, table.offsets).sum())
    tail = f.tail.majorant_tail(f.K, np.abs(z))
    if math.isinf(tail):
        return value, math.inf
    return value, tail + rounding_slack(f, float(np.abs(terms).sum()))


def degree_majorants(f: TruncatedSeries, rho) -> np.ndarray:
    """``sum_{|alpha|=k} |a_alpha| rho**alpha`` for ``k = 0..K``."""
    rho = np.abs(_point(f, rho)).astype(np.float64)
    table = f.table
    terms = np.abs(f.coeffs) * kernels.abs_monomials(table.exps, rho)
    return kernels.block_sums(terms, table.offsets)


def degree_square_sums(f: TruncatedSeries, rho=None) -> np.ndarray:
    """``sum_{|alpha|=k} |a_alpha|**2 rho**(2 alpha)``; ``rho=None`` drops the radius."""
    table = f.table
    sq = np.abs(f.coeffs) ** 2
    if rho is not None:
        rho = np.abs(_point(f, rho)).astype(np.float64)
        sq = sq * kernels.abs_monomials(table.exps, rho * rho)
    return kernels.block_sums(sq, table.offsets)


def radial_derivative(f: TruncatedSeries) -> TruncatedSeries:
    """Euler derivative ``sum_j z_j d f / d z_j``: scales degree-k terms by k.

    The tail is dropped unless ``f`` is an exact polynomial.
    """
    tail = TailBound.exact() if f.tail.is_exact else TailBound()
    return TruncatedSeries(f.n, f.K, f.coeffs * f.table.degrees, tail)


def partial_derivative(f: TruncatedSeries, beta: MultiIndex) -> TruncatedSeries:
    """``d^beta f`` as a series of truncation degree ``K - |beta|``."""
    beta = validate(beta)
    if len(beta) != f.n:
        raise DimensionError(f"index {beta} does not have dimension {f.n}")
    order = sum(beta)
    if order > f.K:
        raise ValueError(f"derivative order {order} exceeds truncation degree {f.K}")
    tail = TailBound.exact() if f.tail.is_exact else TailBound()
    if order == 0:
        return TruncatedSeries(f.n, f.K, f.coeffs, tail)
    src = f.table
    dst = index_table(f.n, f.K - order)
    b = np.array(beta, dtype=np.int64)
    shifted = dst.exps + b
    rows = np.fromiter((src.index(tuple(r)) for r in shifted.tolist()),
                       dtype=np.int64, count=len(dst))
    # (gamma + beta)! / gamma!
    weight = np.ones(len(dst))
    for j, bj in enumerate(beta):
        for i in range(bj):
            weight *= dst.exps[:, j] + bj - i
    return TruncatedSeries(f.n, f.K - order, f.coeffs[rows] * weight, tail)


def taylor_coefficients(f: TruncatedSeries, z) -> TruncatedSeries:
    """Re-expansion ``w -> f_K(z + w)``; its coefficient at ``alpha`` is
    ``d^alpha f_K(z) / alpha!`` for the truncated ``f_K``.

    No tail is attached except for exact polynomials.
    """
    z = _point(f, z)
    table = f.table
    shifted = kernels.taylor_shift(f.coeffs, table.exps, table.succ, z)
    tail = TailBound.exact() if f.tail.is_exact else TailBound()
    return TruncatedSeries(f.n, f.K, shifted, tail)


DUMP_HEADER = ("alpha", "re", "im")


def dump_records(f: TruncatedSeries, nonzero_only: bool = True) -> Iterable[tuple[str, str, str]]:
    for alpha, c in f.terms():
        if nonzero_only and c == 0:
            continue
        yield ",".join(map(str, alpha)), repr(c.real), repr(c.imag)


def dump_csv(f: TruncatedSeries, stream: io.TextIOBase | None = None,
             nonzero_only: bool = True) -> str | None:
    """Write the coefficient table as CSV (header ``alpha,re,im``, LF endings)."""
    own = stream is None
    out = io.StringIO() if own else stream
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(DUMP_HEADER)
    writer.writerows(dump_records(f, nonzero_only))
    return out.getvalue() if own else None


def load_csv(text: str, n: int | None = None, K: int | None = None) -> TruncatedSeries:
    """Inverse of :func:`dump_csv`; the tail is not serialized and comes back as none."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if tuple(header) != DUMP_HEADER:
        raise ValueError(f"unexpected header {header}")
    terms = {}
    for alpha, re_, im in reader:
        terms[tuple(int(a) for a in alpha.split(","))] = complex(float(re_), float(im))
    if n is None:
        if not terms:
            raise ValueError("empty dump needs an explicit dimension")
        n = len(next(iter(terms)))
    return TruncatedSeries.from_terms(n, terms, K)
