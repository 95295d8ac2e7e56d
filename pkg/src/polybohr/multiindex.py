"""Multi-indices, graded-lexicographic enumeration and combinatorial weights.

A multi-index is a plain tuple of nonnegative ints.  Within a fixed total
degree, indices are listed in descending lexicographic order, so that for
``n = 2, k = 3`` the order is ``(3, 0), (2, 1), (1, 2), (0, 3)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb, factorial

import numpy as np

MultiIndex = tuple[int, ...]

INT64_MAX = 2**63 - 1


class CapacityError(OverflowError):
    """An exact integer result does not fit the requested integer width."""


def validate(alpha: MultiIndex) -> MultiIndex:
    alpha = tuple(int(a) for a in alpha)
    if not alpha:
        raise ValueError("multi-index must have dimension >= 1")
    if any(a < 0 for a in alpha):
        raise ValueError(f"negative entry in multi-index {alpha}")
    return alpha


def degree(alpha: MultiIndex) -> int:
    return sum(alpha)


def grlex_key(alpha: MultiIndex) -> tuple:
    """Sort key reproducing the enumeration order."""
    return (sum(alpha), tuple(-a for a in alpha))


def enumerate_degree(n: int, k: int) -> list[MultiIndex]:
    """All multi-indices of dimension ``n`` and total degree ``k``, in order.

    The list has ``comb(k + n - 1, n - 1)`` entries.
    """
    if n < 1:
        raise ValueError("dimension n must be >= 1")
    if k < 0:
        raise ValueError("degree k must be >= 0")
    return list(_enumerate(n, k))


@lru_cache(maxsize=None)
def _enumerate(n: int, k: int) -> tuple[MultiIndex, ...]:
    if n == 1:
        return ((k,),)
    out = []
    for first in range(k, -1, -1):
        for rest in _enumerate(n - 1, k - first):
            out.append((first,) + rest)
    return tuple(out)


def count_degree(n: int, k: int) -> int:
    return comb(k + n - 1, n - 1)


def alpha_factorial(alpha: MultiIndex) -> int:
    """``alpha! = alpha_1! * ... * alpha_n!`` as an exact integer."""
    out = 1
    for a in alpha:
        out *= factorial(a)
    return out


def multinomial(alpha: MultiIndex, bits: int | None = 64) -> int:
    """Exact ``|alpha|! / alpha!``.

    With ``bits`` set, raise :class:`CapacityError` when the value does not
    fit a signed integer of that width.  ``bits=None`` disables the check.
    """
    alpha = validate(alpha)
    # product of binomials keeps intermediates no larger than the result
    value = 1
    total = 0
    for a in alpha:
        total += a
        value *= comb(total, a)
    if bits is not None and value > 2 ** (bits - 1) - 1:
        raise CapacityError(
            f"multinomial{alpha} = {value} exceeds {bits}-bit signed range")
    return value


@lru_cache(maxsize=None)
def multinomial_square_sum(n: int, k: int) -> int:
    """``sum over |alpha| = k of multinomial(alpha)**2`` for dimension ``n``.

    Computed by the binomial convolution
    ``S_n(k) = sum_j C(k, j)**2 * S_{n-1}(k - j)`` with ``S_1(k) = 1``, which
    never touches the multi-index enumeration.
    """
    if n < 1 or k < 0:
        raise ValueError("need n >= 1 and k >= 0")
    if n == 1:
        return 1
    return sum(comb(k, j) ** 2 * multinomial_square_sum(n - 1, k - j)
               for j in range(k + 1))


@dataclass(frozen=True, eq=False)
class IndexTable:
    """Every multi-index of dimension ``n`` with degree at most ``K``.

    Rows of ``exps`` follow the enumeration order, degree by degree;
    ``offsets[k]:offsets[k + 1]`` is the block of degree ``k``.
    ``succ[j, i]`` is the row of ``exps[i] + e_j`` or -1 past degree ``K``.
    """

    n: int
    K: int
    exps: np.ndarray
    degrees: np.ndarray
    offsets: np.ndarray
    succ: np.ndarray
    lookup: dict

    def __len__(self) -> int:
        return self.exps.shape[0]

    def index(self, alpha: MultiIndex) -> int:
        return self.lookup[tuple(alpha)]

    def block(self, k: int) -> slice:
        return slice(int(self.offsets[k]), int(self.offsets[k + 1]))

    @property
    def multinomials(self) -> np.ndarray:
        """``|alpha|!/alpha!`` per row, as floats (exact below 2**53)."""
        return _float_weights(self.n, self.K)[0]

    @property
    def inverse_factorials(self) -> np.ndarray:
        """``1/alpha!`` per row."""
        return _float_weights(self.n, self.K)[1]


@lru_cache(maxsize=32)
def index_table(n: int, K: int) -> IndexTable:
    if n < 1:
        raise ValueError("dimension n must be >= 1")
    if K < 0:
        raise ValueError("truncation degree K must be >= 0")
    rows: list[MultiIndex] = []
    offsets = [0]
    for k in range(K + 1):
        rows.extend(_enumerate(n, k))
        offsets.append(len(rows))
    lookup = {alpha: i for i, alpha in enumerate(rows)}
    exps = np.array(rows, dtype=np.int64).reshape(len(rows), n)
    succ = np.full((n, len(rows)), -1, dtype=np.int64)
    for i, alpha in enumerate(rows):
        if sum(alpha) == K:
            continue
        for j in range(n):
            up = alpha[:j] + (alpha[j] + 1,) + alpha[j + 1:]
            succ[j, i] = lookup[up]
    degrees = exps.sum(axis=1)
    for arr in (exps, succ, degrees):
        arr.setflags(write=False)
    offs = np.array(offsets, dtype=np.int64)
    offs.setflags(write=False)
    return IndexTable(n, K, exps, degrees, offs, succ, lookup)


@lru_cache(maxsize=32)
def _float_weights(n: int, K: int) -> tuple[np.ndarray, np.ndarray]:
    table = index_table(n, K)
    mult = np.array([float(multinomial(a, bits=None)) for a in map(tuple, table.exps)])
    invf = np.array([1 / alpha_factorial(a) for a in map(tuple, table.exps)])
    for arr in (mult, invf):
        arr.setflags(write=False)
    return mult, invf
