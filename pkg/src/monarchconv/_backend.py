"""Backend selection: compiled Cython kernels with a pure-numpy fallback.

The active backend is chosen at import time; set MONARCHCONV_BACKEND to
"python" or "compiled" to override, or call set_backend() at runtime.
Both backends compute identical quantities (summation order may differ
in the last ulp).
"""

import os

import numpy as np

try:
    from . import _kernels

    HAVE_COMPILED = True
except ImportError:  # built without the extension
    _kernels = None
    HAVE_COMPILED = False

_VALID = ("compiled", "python")


def _initial_backend():
    env = os.environ.get("MONARCHCONV_BACKEND", "auto").lower()
    if env == "compiled" and not HAVE_COMPILED:
        raise ImportError("MONARCHCONV_BACKEND=compiled but the extension is not built")
    if env in _VALID:
        return env
    return "compiled" if HAVE_COMPILED else "python"


_backend = _initial_backend()


def get_backend():
    return _backend


def set_backend(name):
    global _backend
    if name not in _VALID:
        raise ValueError(f"unknown backend {name!r}; expected one of {_VALID}")
    if name == "compiled" and not HAVE_COMPILED:
        raise ValueError("compiled backend requested but the extension is not built")
    _backend = name


def _blockdiag_matvec_numpy(blocks, v):
    k, b, _ = blocks.shape
    return np.einsum("kij,kj->ki", blocks, v.reshape(k, b)).ravel()


def blockdiag_matvec(blocks, v, backend=None):
    """Apply diag(blocks[0], ..., blocks[k-1]) to v (1-D, length k*b)."""
    backend = backend or _backend
    if backend == "compiled":
        out = np.empty_like(v)
        if blocks.dtype == np.complex128:
            _kernels.blockdiag_matvec_c(blocks, v, out)
        else:
            _kernels.blockdiag_matvec_d(blocks, v, out)
        return out
    return _blockdiag_matvec_numpy(blocks, v)


def _monarch2_matvec_numpy(left, right, v):
    b = right.shape[1]
    t = v.reshape(b, b).T  # P v, chunk c = row c
    t = np.einsum("kij,kj->ki", right, t)
    t = t.T  # P again
    t = np.einsum("kij,kj->ki", left, np.ascontiguousarray(t))
    return t.T.ravel()  # final P


def monarch2_matvec(left, right, v, backend=None):
    """P L P R P applied to v, with P the sqrt(N)-stride permutation."""
    backend = backend or _backend
    if backend == "compiled":
        out = np.empty_like(v)
        scratch = np.empty_like(v)
        if right.dtype == np.complex128:
            _kernels.monarch2_matvec_c(left, right, v, out, scratch)
        else:
            _kernels.monarch2_matvec_d(left, right, v, out, scratch)
        return out
    return _monarch2_matvec_numpy(left, right, v)
