"""GF(2) linear algebra: rank, solve, and the AIR matrix family."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from smacc import gf2
from smacc.errors import ShapeError, SingularMatrixError

# The canonical 5x3 matrix whose every 3 cyclically adjacent rows are
# independent; also the output of build_air(5, 3).
AIR_5x3 = np.array(
    [[1, 0, 0],
     [0, 1, 0],
     [0, 0, 1],
     [1, 0, 1],
     [0, 1, 1]], dtype=np.uint8)


def span_rank(mat):
    """Independent oracle: rank = log2 of the number of distinct XOR
    combinations of the rows."""
    span = set()
    for picks in itertools.product([0, 1], repeat=mat.shape[0]):
        v = np.zeros(mat.shape[1], dtype=np.uint8)
        for i, b in enumerate(picks):
            if b:
                v ^= mat[i]
        span.add(v.tobytes())
    return len(span).bit_length() - 1


class TestRank:
    def test_zero_matrix(self):
        assert gf2.rank(np.zeros((3, 3), dtype=np.uint8)) == 0

    def test_identity(self):
        assert gf2.rank(np.eye(3, dtype=np.uint8)) == 3

    def test_air_5x3(self):
        # expected value frozen from the span-enumeration oracle
        assert span_rank(AIR_5x3) == 3
        assert gf2.rank(AIR_5x3) == 3

    @given(st.integers(1, 5), st.integers(1, 5), st.integers(0, 2**30))
    def test_matches_span_oracle(self, m, n, seed):
        mat = np.random.default_rng(seed).integers(0, 2, (m, n), dtype=np.uint8)
        assert gf2.rank(mat) == span_rank(mat)

    @given(st.integers(1, 6), st.integers(1, 6), st.integers(0, 2**30))
    def test_bounded_by_dimensions(self, m, n, seed):
        mat = np.random.default_rng(seed).integers(0, 2, (m, n), dtype=np.uint8)
        assert 0 <= gf2.rank(mat) <= min(m, n)


class TestSolve:
    def test_identity_system(self):
        x = gf2.solve(np.eye(3, dtype=np.uint8), [1, 0, 1])
        assert x.tolist() == [1, 0, 1]

    def test_two_by_two(self):
        # rows {(1,1),(0,1)}, rhs (1,1): second row gives x2=1, first gives x1=0
        x = gf2.solve([[1, 1], [0, 1]], [1, 1])
        assert x.tolist() == [0, 1]

    def test_singular(self):
        with pytest.raises(SingularMatrixError):
            gf2.solve(np.zeros((2, 2), dtype=np.uint8), [1, 0])

    def test_matrix_rhs(self):
        a = np.array([[1, 1], [0, 1]], dtype=np.uint8)
        rhs = np.array([[1, 0, 1], [1, 1, 0]], dtype=np.uint8)
        x = gf2.solve(a, rhs)
        assert np.array_equal(gf2.matmul(a, x), rhs)

    @given(st.integers(1, 6), st.integers(0, 2**30))
    def test_roundtrip_on_invertible(self, n, seed):
        rng = np.random.default_rng(seed)
        mat = rng.integers(0, 2, (n, n), dtype=np.uint8)
        if gf2.rank(mat) < n:
            with pytest.raises(SingularMatrixError):
                gf2.solve(mat, rng.integers(0, 2, n, dtype=np.uint8))
            return
        x = rng.integers(0, 2, n, dtype=np.uint8)
        rhs = gf2.matmul(mat, x)
        assert np.array_equal(gf2.solve(mat, rhs), x)

    def test_inverse(self):
        a = AIR_5x3[[2, 3, 4]]
        inv = gf2.inverse(a)
        assert np.array_equal(gf2.matmul(a, inv), np.eye(3, dtype=np.uint8))


class TestXor:
    @given(st.integers(1, 64), st.integers(0, 2**30))
    def test_involution(self, length, seed):
        rng = np.random.default_rng(seed)
        v = rng.integers(0, 2, length, dtype=np.uint8)
        k = rng.integers(0, 2, length, dtype=np.uint8)
        assert np.array_equal((v ^ k) ^ k, v)
        assert not (v ^ v).any()


class TestVerifyAir:
    def test_known_5x3(self):
        assert gf2.verify_air(AIR_5x3)

    def test_identity(self):
        assert gf2.verify_air(np.eye(4, dtype=np.uint8))

    def test_zeros_fail(self):
        assert not gf2.verify_air(np.zeros((5, 3), dtype=np.uint8))

    def test_wide_matrix_rejected(self):
        with pytest.raises(ShapeError):
            gf2.verify_air(np.zeros((2, 3), dtype=np.uint8))

    def test_broken_row_detected(self):
        bad = AIR_5x3.copy()
        bad[3] = bad[0]  # duplicate of row 1 sits in its 3-row windows
        assert not gf2.verify_air(bad)


class TestBuildAir:
    def test_square_is_identity(self):
        assert np.array_equal(gf2.build_air(4, 4).matrix, np.eye(4, dtype=np.uint8))

    def test_single_column_is_ones(self):
        assert gf2.build_air(6, 1).matrix.tolist() == [[1]] * 6

    def test_5x3(self):
        built = gf2.build_air(5, 3)
        assert built.verified
        assert gf2.verify_air(built.matrix)
        assert np.array_equal(built.matrix, AIR_5x3)

    def test_identity_prefix_and_determinism(self):
        a = gf2.build_air(11, 4)
        b = gf2.build_air(11, 4)
        assert np.array_equal(a.matrix, b.matrix)
        assert np.array_equal(a.matrix[:4], np.eye(4, dtype=np.uint8))

    def test_shape_errors(self):
        with pytest.raises(ShapeError):
            gf2.build_air(2, 3)
        with pytest.raises(ShapeError):
            gf2.build_air(3, 0)

    @pytest.mark.parametrize("m", range(1, 25))
    def test_full_grid_verifies(self, m):
        for n in range(1, m + 1):
            built = gf2.build_air(m, n)
            assert built.verified, (m, n)

    @given(st.data())
    @settings(max_examples=40)
    def test_windows_solve_random_rhs(self, data):
        m = data.draw(st.integers(2, 12))
        n = data.draw(st.integers(1, m))
        start = data.draw(st.integers(1, m))
        seed = data.draw(st.integers(0, 2**30))
        window = gf2.build_air(m, n).window(start)
        rhs = np.random.default_rng(seed).integers(0, 2, n, dtype=np.uint8)
        x = gf2.solve(window, rhs)
        assert np.array_equal(gf2.matmul(window, x), rhs)
