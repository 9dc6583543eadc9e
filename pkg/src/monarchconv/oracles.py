"""Brute-force reference implementations used only by tests.

Every routine here is deliberately naive (O(N^2) transforms, dense LU)
and shares no code with the fast paths it checks; the only dependency
is core.py.  Inputs above N = 4096 are rejected.
"""

import numpy as np

from .core import omega
from .errors import InvalidArgumentError, SingularSystemError

_MAX_N = 4096


def _guard(n):
    if n > _MAX_N:
        raise InvalidArgumentError(f"oracle size {n} exceeds test-scale limit {_MAX_N}")


def naive_dft(v):
    """out[i] = sum_j omega_N^(i*j) v[j], computed from the explicit table."""
    v = np.asarray(v)
    N = v.shape[0]
    _guard(N)
    ij = np.outer(np.arange(N), np.arange(N))
    table = omega(N) ** ij
    return table @ v.astype(np.complex128)


def naive_inverse_dft(v):
    """Inverse of naive_dft: conjugate table scaled by 1/N."""
    v = np.asarray(v)
    N = v.shape[0]
    _guard(N)
    ij = np.outer(np.arange(N), np.arange(N))
    table = omega(N) ** (-ij)
    return (table @ v.astype(np.complex128)) / N


def naive_circular_conv(k, u):
    """out[i] = sum_j k[j] u[(i - j) mod N]."""
    k = np.asarray(k)
    u = np.asarray(u)
    if k.shape != u.shape:
        raise InvalidArgumentError("circular convolution requires equal lengths")
    N = k.shape[0]
    _guard(N)
    i = np.arange(N)
    shifted = u[(i[:, None] - i[None, :]) % N]  # shifted[i, j] = u[(i-j) mod N]
    return shifted @ k


def naive_linear_conv(k, u):
    """Polynomial-product coefficients; output length len(k)+len(u)-1."""
    k = np.asarray(k)
    u = np.asarray(u)
    _guard(k.shape[0] + u.shape[0])
    out = np.zeros(k.shape[0] + u.shape[0] - 1, dtype=np.result_type(k, u))
    for j, kj in enumerate(k):
        out[j : j + u.shape[0]] += kj * u
    return out


def interpolate_basis(evals, y, residual_tol=1e-8):
    """Coefficients c with evals @ c = y, by dense LU; checks the residual.

    ``evals`` holds one basis function's values per column over the
    evaluation grid.
    """
    evals = np.asarray(evals)
    y = np.asarray(y)
    _guard(evals.shape[0])
    if evals.shape[0] != evals.shape[1]:
        raise InvalidArgumentError("evaluation matrix must be square")
    try:
        c = np.linalg.solve(evals, y.astype(evals.dtype))
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(str(exc)) from exc
    scale = max(np.abs(y).max(initial=0.0), 1.0)
    residual = np.abs(evals @ c - y).max() / scale
    if residual > residual_tol:
        raise SingularSystemError(f"interpolation residual {residual:.3e} above {residual_tol:.1e}")
    return c


def chebyshev_product_expand(a_coeffs, b_coeffs):
    """Chebyshev-basis coefficients of the product of two T-expansions.

    Uses 2 T_a T_b = T_(a+b) + T_|a-b| termwise.
    """
    a = np.asarray(a_coeffs, dtype=np.float64)
    b = np.asarray(b_coeffs, dtype=np.float64)
    out = np.zeros(a.shape[0] + b.shape[0] - 1)
    for i, ai in enumerate(a):
        if ai == 0.0:
            continue
        for j, bj in enumerate(b):
            if bj == 0.0:
                continue
            half = 0.5 * ai * bj
            out[i + j] += half
            out[abs(i - j)] += half
    return out


def chebyshev_eval(coeffs, x):
    """Evaluate sum_a coeffs[a] T_a(x) by the Chebyshev recurrence."""
    x = np.asarray(x, dtype=np.float64)
    prev = np.ones_like(x)
    cur = x.copy()
    out = coeffs[0] * prev
    if len(coeffs) > 1:
        out = out + coeffs[1] * cur
    for a in range(2, len(coeffs)):
        prev, cur = cur, 2.0 * x * cur - prev
        out = out + coeffs[a] * cur
    return out


def polynomial_eval(coeffs, x):
    """Horner evaluation of sum_a coeffs[a] x^a at scalar or vector x."""
    x = np.asarray(x)
    out = np.zeros_like(x, dtype=np.result_type(coeffs, x))
    for c in coeffs[::-1]:
        out = out * x + c
    return out
