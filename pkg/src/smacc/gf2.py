"""Dense GF(2) linear algebra on numpy uint8 arrays.

Bit vectors are 1-D arrays and bit matrices 2-D arrays with entries in
{0, 1}; XOR is the field addition.  Provides rank, linear solve, inverse,
and the adjacent-independent-row (AIR) matrix family: zero-one matrices
in which every window of n cyclically consecutive rows is invertible.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

import numpy as np

from .errors import ShapeError, SingularMatrixError


def as_bits(values) -> np.ndarray:
    """Coerce to a uint8 array and check all entries are 0 or 1."""
    arr = np.asarray(values, dtype=np.uint8)
    if arr.size and arr.max() > 1:
        raise ValueError("entries must be 0 or 1")
    return arr


def matmul(a, b) -> np.ndarray:
    """Matrix product over GF(2)."""
    return ((as_bits(a).astype(np.int64) @ as_bits(b).astype(np.int64)) % 2).astype(np.uint8)


def rank(mat) -> int:
    """Rank over GF(2) by Gaussian elimination."""
    work = as_bits(mat).copy()
    if work.ndim != 2:
        raise ShapeError("rank expects a 2-D matrix")
    rows, cols = work.shape
    r = 0
    for c in range(cols):
        pivot = None
        for rr in range(r, rows):
            if work[rr, c]:
                pivot = rr
                break
        if pivot is None:
            continue
        if pivot != r:
            work[[r, pivot]] = work[[pivot, r]]
        for rr in range(rows):
            if rr != r and work[rr, c]:
                work[rr] ^= work[r]
        r += 1
        if r == rows:
            break
    return r


def solve(mat, rhs) -> np.ndarray:
    """Solve mat @ x = rhs over GF(2) for an invertible square matrix.

    rhs may be a vector or a matrix of stacked right-hand-side columns;
    the result has the same shape.  Raises SingularMatrixError when the
    matrix is not invertible.
    """
    a = as_bits(mat).copy()
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeError(f"solve expects a square matrix, got {a.shape}")
    n = a.shape[0]
    b = as_bits(rhs).copy()
    vector = b.ndim == 1
    if vector:
        b = b.reshape(n, 1)
    if b.shape[0] != n:
        raise ShapeError(f"rhs has {b.shape[0]} rows, expected {n}")

    for c in range(n):
        pivot = None
        for rr in range(c, n):
            if a[rr, c]:
                pivot = rr
                break
        if pivot is None:
            raise SingularMatrixError(f"matrix is singular at column {c}")
        if pivot != c:
            a[[c, pivot]] = a[[pivot, c]]
            b[[c, pivot]] = b[[pivot, c]]
        for rr in range(n):
            if rr != c and a[rr, c]:
                a[rr] ^= a[c]
                b[rr] ^= b[c]
    return b[:, 0] if vector else b


def inverse(mat) -> np.ndarray:
    """Inverse of a square GF(2) matrix."""
    n = as_bits(mat).shape[0]
    return solve(mat, np.eye(n, dtype=np.uint8))


@dataclass(frozen=True, eq=False)
class AirMatrix:
    """An m x n zero-one matrix whose every n cyclically adjacent rows
    are linearly independent, together with the verification certificate."""

    matrix: np.ndarray
    verified: bool = field(default=False)

    @property
    def rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def cols(self) -> int:
        return self.matrix.shape[1]

    def window(self, start: int) -> np.ndarray:
        """The n x n submatrix of rows start..start+n-1 (1-based, cyclic)."""
        m, n = self.matrix.shape
        idx = [(start - 1 + t) % m for t in range(n)]
        return self.matrix[idx]


def verify_air(mat) -> bool:
    """Check that every cyclic window of n consecutive rows has rank n."""
    a = as_bits(mat)
    if a.ndim != 2:
        raise ShapeError("verify_air expects a 2-D matrix")
    m, n = a.shape
    if m < n:
        raise ShapeError(f"need rows >= cols, got {m} x {n}")
    for start in range(m):
        idx = [(start + t) % m for t in range(n)]
        if rank(a[idx]) != n:
            return False
    return True


@functools.lru_cache(maxsize=None)
def build_air(m: int, n: int) -> AirMatrix:
    """Construct an m x n AIR matrix deterministically.

    Stacks floor(m/n) identity blocks and closes the remainder r = m mod n
    recursively with the transpose of the (n, r) construction, so the first
    n rows are always the identity.  The result is checked with verify_air
    before being returned.  Results are cached; the matrix is shared and
    must not be mutated.
    """
    if n < 1 or m < n:
        raise ShapeError(f"need m >= n >= 1, got m={m}, n={n}")
    mat = _air(m, n)
    if not verify_air(mat):
        raise AssertionError(f"construction failed the window check for ({m}, {n})")
    mat.setflags(write=False)
    return AirMatrix(matrix=mat, verified=True)


def _air(m: int, n: int) -> np.ndarray:
    q, r = divmod(m, n)
    blocks = [np.eye(n, dtype=np.uint8)] * q
    if r:
        blocks.append(_air(n, r).T)
    return np.vstack(blocks)
