# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: block-diagonal matvec and the fused order-2 chain.

The fused kernel folds the stride permutation into the index arithmetic,
so no permuted temporaries are materialized.  Summation order within a
block row is ascending-j, matching a straight C loop.
"""

import numpy as np


def blockdiag_matvec_c(const double complex[:, :, ::1] blocks,
                       const double complex[::1] v,
                       double complex[::1] out):
    cdef Py_ssize_t k = blocks.shape[0]
    cdef Py_ssize_t b = blocks.shape[1]
    cdef Py_ssize_t blk, i, j, base
    cdef double complex acc
    for blk in range(k):
        base = blk * b
        for i in range(b):
            acc = 0
            for j in range(b):
                acc = acc + blocks[blk, i, j] * v[base + j]
            out[base + i] = acc


def blockdiag_matvec_d(const double[:, :, ::1] blocks,
                       const double[::1] v,
                       double[::1] out):
    cdef Py_ssize_t k = blocks.shape[0]
    cdef Py_ssize_t b = blocks.shape[1]
    cdef Py_ssize_t blk, i, j, base
    cdef double acc
    for blk in range(k):
        base = blk * b
        for i in range(b):
            acc = 0.0
            for j in range(b):
                acc = acc + blocks[blk, i, j] * v[base + j]
            out[base + i] = acc


def monarch2_matvec_c(const double complex[:, :, ::1] left,
                      const double complex[:, :, ::1] right,
                      const double complex[::1] v,
                      double complex[::1] out,
                      double complex[::1] scratch):
    """out = P L P R P v for N = b*b and P the (b, N) stride permutation.

    ``right`` is applied first.  The three permutations are absorbed into
    gather/scatter index arithmetic: (P v)[c*b + j] = v[j*b + c].
    """
    cdef Py_ssize_t b = right.shape[1]
    cdef Py_ssize_t c, i, j
    cdef double complex acc
    # scratch = R (P v)
    for c in range(b):
        for i in range(b):
            acc = 0
            for j in range(b):
                acc = acc + right[c, i, j] * v[j * b + c]
            scratch[c * b + i] = acc
    # out = P L (P scratch), written permuted in one pass
    for c in range(b):
        for i in range(b):
            acc = 0
            for j in range(b):
                acc = acc + left[c, i, j] * scratch[j * b + c]
            out[i * b + c] = acc


def monarch2_matvec_d(const double[:, :, ::1] left,
                      const double[:, :, ::1] right,
                      const double[::1] v,
                      double[::1] out,
                      double[::1] scratch):
    cdef Py_ssize_t b = right.shape[1]
    cdef Py_ssize_t c, i, j
    cdef double acc
    for c in range(b):
        for i in range(b):
            acc = 0.0
            for j in range(b):
                acc = acc + right[c, i, j] * v[j * b + c]
            scratch[c * b + i] = acc
    for c in range(b):
        for i in range(b):
            acc = 0.0
            for j in range(b):
                acc = acc + left[c, i, j] * scratch[j * b + c]
            out[i * b + c] = acc
