import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from monarchconv.core import (
    BlockDiagonalMatrix,
    IndexPermutation,
    apply_permutation,
    block_diag_matvec,
    digit_reversal,
    materialize_blockdiag,
    omega,
    permutation_sigma,
    roots_of_unity,
)
from monarchconv.errors import InvalidArgumentError


class TestScalars:
    def test_complex_mult_associativity_unit_magnitude(self):
        rng = np.random.default_rng(0)
        theta = rng.uniform(0, 2 * np.pi, size=(200, 3))
        a, b, c = np.exp(1j * theta.T)
        err = np.abs((a * b) * c - a * (b * c))
        assert err.max() <= 1e-12 * (np.abs(a) * np.abs(b) * np.abs(c)).max()

    @pytest.mark.parametrize("N", [2, 3, 16, 100, 1023, 4096])
    def test_omega_N_is_Nth_root(self, N):
        assert abs(omega(N) ** N - 1.0) <= 1e-10

    def test_roots_of_unity_table(self):
        r = roots_of_unity(8)
        assert r.shape == (8,)
        assert abs(r[1] - omega(8)) < 1e-15
        assert np.abs(np.abs(r) - 1.0).max() < 1e-14


class TestPermutationSigma:
    def test_sigma_2_4(self):
        # sigma formula applied to each i in {0..3}
        assert permutation_sigma(2, 4).map.tolist() == [0, 2, 1, 3]

    def test_sigma_b_equals_N_is_identity(self):
        assert permutation_sigma(8, 8) == IndexPermutation.identity(8)

    def test_sigma_sqrtN_self_inverse(self):
        p = permutation_sigma(4, 16)
        assert p.compose(p) == IndexPermutation.identity(16)

    @pytest.mark.parametrize("b,N", [(2, 8), (4, 8), (2, 16), (8, 16), (3, 12), (16, 256)])
    def test_sigma_mutually_inverse_with_complement(self, b, N):
        left = permutation_sigma(b, N)
        right = permutation_sigma(N // b, N)
        assert left.compose(right) == IndexPermutation.identity(N)
        assert right.compose(left) == IndexPermutation.identity(N)

    def test_rejects_non_divisor(self):
        with pytest.raises(InvalidArgumentError):
            permutation_sigma(3, 8)

    def test_rejects_nonpositive(self):
        with pytest.raises(InvalidArgumentError):
            permutation_sigma(0, 8)


class TestApplyPermutation:
    def test_explicit_shuffle(self):
        p = IndexPermutation([0, 2, 1, 3])
        out = apply_permutation(p, np.array([1.0, 2.0, 3.0, 4.0]))
        assert out.tolist() == [1.0, 3.0, 2.0, 4.0]

    def test_identity(self):
        v = np.arange(6.0)
        assert apply_permutation(IndexPermutation.identity(6), v).tolist() == v.tolist()

    def test_roundtrip_with_inverse_is_exact(self):
        rng = np.random.default_rng(1)
        p = IndexPermutation(rng.permutation(33))
        v = rng.normal(size=33)
        back = apply_permutation(p.inverse(), apply_permutation(p, v))
        assert np.array_equal(back, v)  # bitwise

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.floats(allow_nan=False, width=64), min_size=1, max_size=40), st.randoms())
    def test_preserves_multiset_bitwise(self, values, rand):
        v = np.array(values)
        idx = list(range(len(v)))
        rand.shuffle(idx)
        out = apply_permutation(IndexPermutation(idx), v)
        assert sorted(out.tobytes()[i : i + 8] for i in range(0, 8 * len(v), 8)) == sorted(
            v.tobytes()[i : i + 8] for i in range(0, 8 * len(v), 8)
        )

    def test_length_mismatch(self):
        with pytest.raises(InvalidArgumentError):
            apply_permutation(IndexPermutation([0, 1]), np.zeros(3))

    def test_non_bijection_rejected(self):
        with pytest.raises(InvalidArgumentError):
            IndexPermutation([0, 0, 1])


class TestDigitReversal:
    def test_two_digits_is_sigma(self):
        assert digit_reversal(2, 2) == permutation_sigma(2, 4)

    def test_single_digit_identity(self):
        assert digit_reversal(5, 1) == IndexPermutation.identity(5)

    def test_b2_p3_enumeration(self):
        # (d2,d1,d0) -> (d0,d1,d2): 1=(0,0,1) -> (1,0,0)=4
        assert digit_reversal(2, 3).map.tolist() == [0, 4, 2, 6, 1, 5, 3, 7]

    def test_involution(self):
        r = digit_reversal(3, 3)
        assert r.compose(r) == IndexPermutation.identity(27)


class TestBlockDiagMatvec:
    def test_identity_blocks(self):
        B = BlockDiagonalMatrix.identity(3, 4)
        v = np.arange(12.0)
        assert block_diag_matvec(B, v).tolist() == v.tolist()

    def test_swap_blocks(self):
        swap = np.array([[0.0, 1.0], [1.0, 0.0]])
        B = BlockDiagonalMatrix(np.stack([swap, swap]))
        out = block_diag_matvec(B, np.array([1.0, 2.0, 3.0, 4.0]))
        assert out.tolist() == [2.0, 1.0, 4.0, 3.0]

    @pytest.mark.parametrize("N,b", [(4, 2), (16, 4), (64, 8), (256, 16)])
    def test_matches_dense_oracle(self, N, b):
        rng = np.random.default_rng(N)
        for trial in range(25):
            blocks = rng.normal(size=(N // b, b, b))
            if trial % 2:
                blocks = blocks + 1j * rng.normal(size=blocks.shape)
            B = BlockDiagonalMatrix(blocks)
            v = rng.normal(size=N) + (1j * rng.normal(size=N) if trial % 2 else 0.0)
            want = materialize_blockdiag(B) @ v
            got = block_diag_matvec(B, v)
            denom = max(np.abs(want).max(), 1.0)
            assert np.abs(got - want).max() / denom <= 1e-10

    def test_dimension_mismatch(self):
        B = BlockDiagonalMatrix.identity(2, 2)
        with pytest.raises(InvalidArgumentError):
            block_diag_matvec(B, np.zeros(5))


class TestMaterializeBlockdiag:
    def test_single_block(self):
        blk = np.arange(9.0).reshape(1, 3, 3)
        assert np.array_equal(materialize_blockdiag(BlockDiagonalMatrix(blk)), blk[0])

    def test_two_scalar_blocks(self):
        B = BlockDiagonalMatrix(np.array([[[2.0]], [[5.0]]]))
        assert np.array_equal(materialize_blockdiag(B), np.diag([2.0, 5.0]))

    def test_nnz_structure(self):
        rng = np.random.default_rng(3)
        B = BlockDiagonalMatrix(rng.uniform(1.0, 2.0, size=(4, 3, 3)))
        dense = materialize_blockdiag(B)
        assert np.count_nonzero(dense) == 4 * 3 * 3
