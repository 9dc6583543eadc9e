"""Order-p Monarch factorizations: N x N products of permutations and
block-diagonal factors, applied in O(p * N^((p+1)/p)) without ever
materializing the dense matrix.

Two recipes are supported:

* "order2":   M = P L P R P with P = sigma(sqrt(N), N); factors are
              stored first-applied-first, i.e. factors == (R, L).
* "multivar": the order-p chain of b x b block-diagonal factors
              interleaved with strided sub-permutations plus a base-b
              digit reversal on the input side (see multivar.py).

Columns of an order-2 M are evaluations of the basis polynomials
q_(j1,j0)(Z) = l_(j0)(Z) * r_(j0,j1)(Z^sqrt(N)) over the N-th roots of
unity, with the coefficient layout of CoefficientMatrices below.
"""

import io
import math
import struct

import numpy as np

from . import counting
from ._backend import get_backend, monarch2_matvec
from .core import (
    COMPLEX,
    REAL,
    BlockDiagonalMatrix,
    blockwise_permutation,
    digit_reversal,
    field_dtype,
    field_of,
    permutation_sigma,
)
from .errors import InvalidArgumentError, ResourceLimitError, SingularFactorError

ORDER2 = "order2"
MULTIVAR = "multivar"

_MATERIALIZE_LIMIT = 4096
_COND_LIMIT = 1e12


def integer_root(N, p):
    """The integer b with b**p == N, or raise invalid-argument."""
    if N < 1:
        raise InvalidArgumentError(f"N={N} must be positive")
    b = round(N ** (1.0 / p))
    for cand in (b - 1, b, b + 1):
        if cand >= 1 and cand**p == N:
            return cand
    raise InvalidArgumentError(f"N={N} is not a perfect {p}-th power")


class MonarchFactorization:
    """Immutable order-p Monarch operator.

    ``factors[a]`` is the a-th block-diagonal factor in application
    order (factors[0] touches the input first).
    """

    __slots__ = ("N", "p", "b", "factors", "recipe", "_sigma", "_rev", "_chain", "_inv_ok")

    def __init__(self, factors, recipe=ORDER2):
        factors = tuple(factors)
        if not factors:
            raise InvalidArgumentError("at least one factor required")
        p = len(factors)
        N = factors[0].size
        b = factors[0].block_size
        for a, f in enumerate(factors):
            if f.size != N or f.block_size != b:
                raise InvalidArgumentError(f"factor {a} has inconsistent shape")
        if b**p != N:
            raise InvalidArgumentError(f"block size {b} with p={p} factors does not give N={N}")
        if recipe == ORDER2:
            if p != 2:
                raise InvalidArgumentError("order2 recipe requires exactly 2 factors")
        elif recipe != MULTIVAR:
            raise InvalidArgumentError(f"unknown recipe {recipe!r}")
        self.N = N
        self.p = p
        self.b = b
        self.factors = factors
        self.recipe = recipe
        self._inv_ok = [False]
        if recipe == ORDER2:
            self._sigma = permutation_sigma(b, N)
            self._rev = None
            self._chain = None
        else:
            self._sigma = None
            self._rev = digit_reversal(b, p)
            chain = []
            for a in range(1, p):
                chunk = b ** (p - a + 1)
                chain.append(blockwise_permutation(permutation_sigma(b, chunk), N // chunk))
            self._chain = tuple(chain)

    @property
    def field(self):
        return field_of(self.factors[0].blocks)

    def _check_invertible(self):
        if self._inv_ok[0]:
            return
        for a, f in enumerate(self.factors):
            conds = np.linalg.cond(f.blocks)
            worst = int(np.argmax(conds))
            if not np.isfinite(conds[worst]) or conds[worst] > _COND_LIMIT:
                raise SingularFactorError(a, worst, float(conds[worst]))
        self._inv_ok[0] = True


def monarch_matvec(M, v):
    """M @ v via the permutation/block-multiply chain; never dense."""
    v = np.asarray(v)
    if v.shape != (M.N,):
        raise InvalidArgumentError(f"length mismatch: N={M.N}, input shape {v.shape}")
    if M.recipe == ORDER2:
        right, left = M.factors
        dtype = np.result_type(right.blocks.dtype, v.dtype)
        if get_backend() == "compiled" and right.blocks.dtype == dtype:
            counting.add_macs(2 * M.N * M.b, dtype == np.complex128)
            return monarch2_matvec(left.blocks, right.blocks, np.ascontiguousarray(v, dtype=dtype))
        t = M._sigma.apply(v.astype(dtype, copy=False))
        t = right.matvec(t)
        t = M._sigma.apply(t)
        t = left.matvec(t)
        return M._sigma.apply(t)
    t = M._rev.apply(v)
    t = M.factors[0].matvec(t)
    for a in range(1, M.p):
        t = M._chain[a - 1].apply(t)
        t = M.factors[a].matvec(t)
    return t


def monarch_inverse_matvec(M, y):
    """M^{-1} @ y by inverting the chain: per-block LU solves and inverse
    permutations in reverse application order."""
    y = np.asarray(y)
    if y.shape != (M.N,):
        raise InvalidArgumentError(f"length mismatch: N={M.N}, input shape {y.shape}")
    M._check_invertible()
    try:
        if M.recipe == ORDER2:
            right, left = M.factors
            t = M._sigma.apply(y)
            t = left.solve(t)
            t = M._sigma.apply(t)
            t = right.solve(t)
            return M._sigma.apply(t)
        t = y
        for a in range(M.p - 1, 0, -1):
            t = M.factors[a].solve(t)
            t = M._chain[a - 1].inverse().apply(t)
        t = M.factors[0].solve(t)
        return M._rev.apply(t)
    except np.linalg.LinAlgError as exc:  # exactly singular block
        raise SingularFactorError(-1, -1) from exc


def monarch_materialize(M):
    """Dense equivalent, built column-by-column from monarch_matvec so the
    columns are bit-identical to factors_to_basis_eval outputs."""
    if M.N > _MATERIALIZE_LIMIT:
        raise ResourceLimitError(f"refusing to materialize N={M.N} > {_MATERIALIZE_LIMIT}")
    dtype = field_dtype(M.field)
    out = np.empty((M.N, M.N), dtype=dtype)
    e = np.zeros(M.N, dtype=dtype)
    for j in range(M.N):
        e[j] = 1.0
        out[:, j] = monarch_matvec(M, e)
        e[j] = 0.0
    return out


def factors_to_basis_eval(M, j):
    """Column j of M: the j-th basis polynomial evaluated over the grid."""
    if not 0 <= j < M.N:
        raise InvalidArgumentError(f"column index {j} out of range for N={M.N}")
    e = np.zeros(M.N, dtype=field_dtype(M.field))
    e[j] = 1.0
    return monarch_matvec(M, e)


class CoefficientMatrices:
    """Coefficient blocks defining an order-2 Monarch's basis polynomials.

    ``L`` is N x sqrt(N); column j1 holds the monomial coefficients of
    l_(j1)(Z) (degree < N).  ``R`` stacks sqrt(N) blocks of sqrt(N) rows;
    block j1, column j0 holds the coefficients of r_(j1,j0)(Y)
    (degree < sqrt(N)).
    """

    __slots__ = ("L", "R", "N", "s")

    def __init__(self, L, R):
        L = np.asarray(L)
        R = np.asarray(R)
        if L.ndim != 2 or L.shape != R.shape:
            raise InvalidArgumentError("L and R must be equal-shape 2-D arrays")
        N, s = L.shape
        if s * s != N:
            raise InvalidArgumentError(f"coefficient shape {L.shape} is not N x sqrt(N)")
        self.L = L
        self.R = R
        self.N = N
        self.s = s

    @classmethod
    def dft_identity(cls, N):
        """All R blocks and the top L block set to the identity."""
        s = integer_root(N, 2)
        L = np.zeros((N, s))
        L[:s, :] = np.eye(s)
        R = np.tile(np.eye(s), (s, 1))
        return cls(L, R)


def _dft_matmat(A):
    """F_N @ A with F_N[i, j] = omega_N^(i*j); via the inverse FFT identity."""
    return A.shape[0] * np.fft.ifft(A, axis=0)


def coeffs_to_factors(C):
    """Assemble the order-2 factorization whose column (j1, j0) evaluates
    l_(j0)(Z) * r_(j0,j1)(Z^sqrt(N)) at the N-th roots of unity.

    The left factor comes from slicing P F_N L into sqrt(N) diagonal
    blocks; each right block is F_sqrt(N) times the matching R block.
    """
    s = C.s
    sigma = permutation_sigma(s, C.N)
    Ldense = _dft_matmat(C.L.astype(np.complex128))
    Lperm = np.empty_like(Ldense)
    Lperm[sigma.map] = Ldense
    Lblocks = Lperm.reshape(s, s, s)
    R3 = C.R.astype(np.complex128).reshape(s, s, s)
    Rblocks = s * np.fft.ifft(R3, axis=1)
    return MonarchFactorization(
        [BlockDiagonalMatrix(Rblocks), BlockDiagonalMatrix(Lblocks)], ORDER2
    )


def monarch_dft(N):
    """The order-2 Monarch equal to the DFT matrix, entry [i,j] = omega_N^(i*j)."""
    integer_root(N, 2)
    return coeffs_to_factors(CoefficientMatrices.dft_identity(N))


def dft_inverse_matvec(M_dft, v):
    """Inverse-DFT application: conjugate of the forward transform, scaled 1/N."""
    return np.conj(monarch_matvec(M_dft, np.conj(np.asarray(v, dtype=np.complex128)))) / M_dft.N


def flop_count(N, p, op):
    """Closed-form real-FLOP cost of a complex Monarch operation.

    matvec: p * (N/b) * b^2 complex MACs at 8 real FLOPs each, with b =
    N^(1/p); permutations are free.  conv: three matvecs plus N complex
    elementwise products at 6 real FLOPs each.
    """
    b = integer_root(N, p)
    matvec = p * (N // b) * b * b * counting.COMPLEX_MAC_FLOPS
    if op == "matvec":
        return matvec
    if op == "conv":
        return 3 * matvec + N * counting.COMPLEX_MULT_FLOPS
    raise InvalidArgumentError(f"unknown op {op!r}; expected 'matvec' or 'conv'")


def flop_count_dense(N):
    """Real-FLOP cost of a dense real N x N matvec (N^2 MACs at 2 FLOPs)."""
    return counting.REAL_MAC_FLOPS * N * N


def random_factorization(N, p=2, field=COMPLEX, seed=0, diag_boost=2.0):
    """Deterministic random factorization for tests and benchmarks.

    Block entries are i.i.d. uniform on [-1, 1] (real field) or uniform
    on the unit disk (complex field); diag_boost * I is added per block
    to keep every block invertible.
    """
    b = integer_root(N, p)
    recipe = ORDER2 if p == 2 else MULTIVAR
    rng = np.random.default_rng(seed)
    factors = []
    for _ in range(p):
        shape = (N // b, b, b)
        if field == COMPLEX:
            r = np.sqrt(rng.uniform(0.0, 1.0, shape))
            theta = rng.uniform(0.0, 2 * np.pi, shape)
            blocks = r * np.exp(1j * theta)
        else:
            blocks = rng.uniform(-1.0, 1.0, shape)
        blocks += diag_boost * np.eye(b, dtype=blocks.dtype)
        factors.append(BlockDiagonalMatrix(blocks))
    return MonarchFactorization(factors, recipe)


# ---------------------------------------------------------------------------
# Serialization: 16-byte header (magic "MNR1", u32 N, u16 p, u16 field tag,
# u16 recipe tag, u16 reserved), then the factors in application order,
# each block row-major as little-endian float64 (re, im) pairs.
# ---------------------------------------------------------------------------

_MAGIC = b"MNR1"
_HEADER = struct.Struct("<4sIHHHH")
_FIELD_TAGS = {REAL: 0, COMPLEX: 1}
_RECIPE_TAGS = {ORDER2: 0, MULTIVAR: 1}


def save_factorization(M, path):
    header = _HEADER.pack(
        _MAGIC, M.N, M.p, _FIELD_TAGS[M.field], _RECIPE_TAGS[M.recipe], 0
    )
    payload = io.BytesIO()
    payload.write(header)
    for f in M.factors:
        data = f.blocks.astype(np.complex128).ravel()
        pairs = np.empty(2 * data.size, dtype="<f8")
        pairs[0::2] = data.real
        pairs[1::2] = data.imag
        payload.write(pairs.tobytes())
    with open(path, "wb") as fh:
        fh.write(payload.getvalue())


def load_factorization(path):
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < _HEADER.size:
        raise InvalidArgumentError("truncated factorization file")
    magic, N, p, field_tag, recipe_tag, _ = _HEADER.unpack_from(raw)
    if magic != _MAGIC:
        raise InvalidArgumentError(f"bad magic {magic!r}")
    try:
        field = {v: k for k, v in _FIELD_TAGS.items()}[field_tag]
        recipe = {v: k for k, v in _RECIPE_TAGS.items()}[recipe_tag]
    except KeyError:
        raise InvalidArgumentError("unknown field or recipe tag") from None
    b = integer_root(N, p)
    per_factor = (N // b) * b * b
    expected = _HEADER.size + p * per_factor * 16
    if len(raw) != expected:
        raise InvalidArgumentError(
            f"file size {len(raw)} does not match header (expected {expected})"
        )
    factors = []
    offset = _HEADER.size
    for _ in range(p):
        pairs = np.frombuffer(raw, dtype="<f8", count=2 * per_factor, offset=offset)
        offset += per_factor * 16
        blocks = (pairs[0::2] + 1j * pairs[1::2]).reshape(N // b, b, b)
        if field == REAL:
            if np.any(blocks.imag != 0.0):
                raise InvalidArgumentError("real-tagged file contains imaginary parts")
            blocks = blocks.real.copy()
        factors.append(BlockDiagonalMatrix(blocks))
    return MonarchFactorization(factors, recipe)
