"""Backend selection for the multi-index hot loops.

The compiled extension is used when it imports; ``POLYBOHR_PURE=1`` forces
the numpy fallback.  ``use_backend`` switches at runtime (tests, benchmarks).
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

_active: ModuleType = _pykernels


def available_backends() -> list[str]:
    return ["python"] + (["compiled"] if _ckernels is not None else [])


def use_backend(name: str) -> None:
    global _active
    if name == "compiled":
        if _ckernels is None:
            raise RuntimeError("compiled kernels are not built")
        _active = _ckernels
    elif name == "python":
        _active = _pykernels
    else:
        raise ValueError(f"unknown backend {name!r}")


def backend() -> str:
    return "compiled" if _active is _ckernels else "python"


def monomials(exps, z):
    return _active.monomials(exps, z)


def abs_monomials(exps, rho):
    return _active.abs_monomials(exps, rho)


def block_sums(values, offsets):
    return _active.block_sums(values, offsets)


def taylor_shift(coeffs, exps, succ, z):
    return _active.taylor_shift(coeffs, exps, succ, z)


if _ckernels is not None and os.environ.get("POLYBOHR_PURE", "") not in ("1", "true", "yes"):
    _active = _ckernels
