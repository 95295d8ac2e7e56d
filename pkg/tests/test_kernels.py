from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from polybohr import _pykernels, kernels
from polybohr.multiindex import index_table

compiled_only = pytest.mark.skipif("compiled" not in kernels.available_backends(),
                                   reason="extension not built")


def test_backend_switching():
    before = kernels.backend()
    kernels.use_backend("python")
    assert kernels.backend() == "python"
    with pytest.raises(ValueError):
        kernels.use_backend("fortran")
    kernels.use_backend(before)


def _close(x, y, scale=1.0):
    return np.all(np.abs(x - y) <= 1e-13 * (np.abs(y) + scale))


@compiled_only
@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4), st.integers(0, 9), st.integers(0, 2**32 - 1))
def test_backends_agree(n, K, seed):
    # C and numpy may round complex products differently, so agreement is to
    # a few ulps rather than bitwise; real kernels match exactly
    from polybohr import _ckernels
    t = index_table(n, K)
    rng = np.random.default_rng(seed)
    c = rng.normal(size=len(t)) + 1j * rng.normal(size=len(t))
    z = rng.normal(size=n) * 0.4 + 1j * rng.normal(size=n) * 0.4
    rho = np.abs(z)
    assert _close(_pykernels.monomials(t.exps, z), _ckernels.monomials(t.exps, z))
    assert np.array_equal(_pykernels.abs_monomials(t.exps, rho),
                          _ckernels.abs_monomials(t.exps, rho))
    assert np.array_equal(_pykernels.block_sums(np.abs(c), t.offsets),
                          _ckernels.block_sums(np.abs(c), t.offsets))
    assert _close(_pykernels.block_sums(c, t.offsets), _ckernels.block_sums(c, t.offsets),
                  np.abs(c).sum())
    shifted = _pykernels.taylor_shift(c, t.exps, t.succ, z)
    assert _close(shifted, _ckernels.taylor_shift(c, t.exps, t.succ, z),
                  np.abs(shifted).max() * (K + 1) ** n)


def test_block_sums_sequential(backend):
    t = index_table(2, 3)
    v = np.arange(len(t), dtype=float)
    sums = kernels.block_sums(v, t.offsets)
    assert sums.tolist() == [0.0, 1 + 2, 3 + 4 + 5, 6 + 7 + 8 + 9]


def test_taylor_shift_one_variable(backend):
    # (1 + w)^3 re-centred at 0.5: coefficients of (1.5 + w)^3
    t = index_table(1, 3)
    c = np.array([1, 3, 3, 1], dtype=complex)
    out = kernels.taylor_shift(c, t.exps, t.succ, np.array([0.5 + 0j]))
    assert np.allclose(out, [1.5 ** 3, 3 * 1.5 ** 2, 3 * 1.5, 1])
