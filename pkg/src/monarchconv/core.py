"""Scalar fields, index permutations, and block-diagonal matrices.

Conventions used throughout the package:

* the primitive root of unity is omega_N = exp(+2*pi*1j/N);
* an index pair (i1, i0) with block size b always means i = i1*b + i0;
* the stride permutation sigma(b, N) maps i = i1*b + i0 to i0*(N/b) + i1.

Everything here is immutable after construction and safe to share
between threads.
"""

import numpy as np

from . import counting
from ._backend import blockdiag_matvec as _backend_blockdiag_matvec
from .errors import InvalidArgumentError

REAL = "real"
COMPLEX = "complex"

_FIELD_DTYPES = {REAL: np.float64, COMPLEX: np.complex128}


def field_dtype(field):
    try:
        return _FIELD_DTYPES[field]
    except KeyError:
        raise InvalidArgumentError(f"unknown field {field!r}") from None


def field_of(array):
    return COMPLEX if np.iscomplexobj(array) else REAL


def omega(N):
    """Primitive N-th root of unity, exp(+2*pi*1j/N)."""
    return np.exp(2j * np.pi / N)


def roots_of_unity(N):
    """Vector (1, omega_N, omega_N^2, ..., omega_N^(N-1))."""
    return np.exp(2j * np.pi * np.arange(N) / N)


class IndexPermutation:
    """A permutation of [0, N) stored as an explicit destination map.

    ``map[i]`` is the destination of source index i, so applying the
    permutation computes out[map[i]] = v[i].
    """

    __slots__ = ("map",)

    def __init__(self, dest):
        dest = np.asarray(dest, dtype=np.int64)
        if dest.ndim != 1:
            raise InvalidArgumentError("permutation map must be 1-D")
        n = dest.shape[0]
        seen = np.zeros(n, dtype=bool)
        valid = (dest >= 0) & (dest < n)
        if not valid.all():
            raise InvalidArgumentError("permutation map entries out of range")
        seen[dest] = True
        if not seen.all():
            raise InvalidArgumentError("permutation map is not a bijection")
        dest.setflags(write=False)
        self.map = dest

    @property
    def size(self):
        return self.map.shape[0]

    @classmethod
    def identity(cls, N):
        return cls(np.arange(N))

    def apply(self, v):
        v = np.asarray(v)
        if v.shape[0] != self.size:
            raise InvalidArgumentError(
                f"length mismatch: permutation of size {self.size}, input {v.shape[0]}"
            )
        out = np.empty_like(v)
        out[self.map] = v
        return out

    def inverse(self):
        inv = np.empty_like(self.map)
        inv[self.map] = np.arange(self.size)
        return IndexPermutation(inv)

    def compose(self, other):
        """Permutation equivalent to applying ``other`` first, then self."""
        return IndexPermutation(self.map[other.map])

    def matrix(self):
        """Dense 0/1 matrix P with (P v) = self.apply(v).  Test-scale only."""
        P = np.zeros((self.size, self.size))
        P[self.map, np.arange(self.size)] = 1.0
        return P

    def __eq__(self, other):
        return isinstance(other, IndexPermutation) and np.array_equal(self.map, other.map)

    def __repr__(self):
        return f"IndexPermutation({self.map.tolist()})"


def permutation_sigma(b, N):
    """The stride permutation sigma(b, N): i1*b + i0 -> i0*(N/b) + i1.

    Self-inverse when b*b == N; in general its inverse is sigma(N/b, N).
    """
    if b < 1 or N % b != 0:
        raise InvalidArgumentError(f"b={b} must be >= 1 and divide N={N}")
    i = np.arange(N)
    i0 = i % b
    i1 = i // b
    return IndexPermutation(i0 * (N // b) + i1)


def blockwise_permutation(perm, copies):
    """Apply ``perm`` independently to consecutive chunks, ``copies`` times."""
    M = perm.size
    offsets = np.arange(copies)[:, None] * M
    return IndexPermutation((perm.map[None, :] + offsets).ravel())


def digit_reversal(b, p):
    """Permutation reversing the base-b digit string of indices in [0, b**p)."""
    N = b**p
    i = np.arange(N)
    rev = np.zeros(N, dtype=np.int64)
    for _ in range(p):
        rev = rev * b + i % b
        i = i // b
    return IndexPermutation(rev)


def apply_permutation(p, v):
    """out[p.map[i]] = v[i]; preserves entries bitwise."""
    return p.apply(v)


class BlockDiagonalMatrix:
    """N x N matrix stored as num_blocks dense blocks of size b x b."""

    __slots__ = ("blocks",)

    def __init__(self, blocks):
        blocks = np.ascontiguousarray(blocks)
        if blocks.ndim != 3 or blocks.shape[1] != blocks.shape[2]:
            raise InvalidArgumentError("blocks must have shape (num_blocks, b, b)")
        if blocks.dtype not in (np.float64, np.complex128):
            blocks = blocks.astype(np.complex128 if np.iscomplexobj(blocks) else np.float64)
        blocks.setflags(write=False)
        self.blocks = blocks

    @classmethod
    def identity(cls, num_blocks, block_size, field=REAL):
        eye = np.eye(block_size, dtype=field_dtype(field))
        return cls(np.broadcast_to(eye, (num_blocks, block_size, block_size)).copy())

    @property
    def num_blocks(self):
        return self.blocks.shape[0]

    @property
    def block_size(self):
        return self.blocks.shape[1]

    @property
    def size(self):
        return self.num_blocks * self.block_size

    @property
    def field(self):
        return field_of(self.blocks)

    def matvec(self, v):
        v = np.asarray(v)
        if v.shape != (self.size,):
            raise InvalidArgumentError(
                f"dimension mismatch: matrix is {self.size}x{self.size}, vector has shape {v.shape}"
            )
        dtype = np.result_type(self.blocks.dtype, v.dtype)
        v = np.ascontiguousarray(v, dtype=dtype)
        blocks = self.blocks if self.blocks.dtype == dtype else self.blocks.astype(dtype)
        counting.add_macs(self.num_blocks * self.block_size**2, dtype == np.complex128)
        return _backend_blockdiag_matvec(blocks, v)

    def matmat(self, A):
        """Dense product (self @ A) for materialization/test paths."""
        k, b = self.num_blocks, self.block_size
        if A.shape[0] != self.size:
            raise InvalidArgumentError("dimension mismatch in matmat")
        out = np.einsum("kij,kjm->kim", self.blocks, A.reshape(k, b, -1))
        return out.reshape(self.size, -1)

    def solve(self, y):
        """Solve (self @ x) = y blockwise by LU with partial pivoting."""
        k, b = self.num_blocks, self.block_size
        counting.add_macs(k * b * b, self.field == COMPLEX or np.iscomplexobj(y))
        x = np.linalg.solve(self.blocks, y.reshape(k, b, 1))
        return x.reshape(self.size)

    def materialize(self):
        """Dense N x N with the blocks on the diagonal, zeros elsewhere."""
        k, b = self.num_blocks, self.block_size
        out = np.zeros((self.size, self.size), dtype=self.blocks.dtype)
        for blk in range(k):
            out[blk * b : (blk + 1) * b, blk * b : (blk + 1) * b] = self.blocks[blk]
        return out


def block_diag_matvec(B, v):
    """num_blocks independent b x b matrix-vector products."""
    return B.matvec(v)


def materialize_blockdiag(B):
    return B.materialize()
