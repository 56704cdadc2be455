"""
Exact linear algebra over a galois field.

Matrices are numpy arrays paired with the field they live in: int64 arrays for
a BaseField, object arrays of packed ints for a FieldTower. Addition is XOR in
both cases, so row operations use ``^`` directly.
"""

from __future__ import annotations

import logging
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import DimensionError, FieldError
from .galois import BaseField, FieldTower

logger = logging.getLogger(__name__)

Field = Union[BaseField, FieldTower]
Matrix = np.ndarray


def _is_tower(field: Field) -> bool:
    return isinstance(field, FieldTower)


def as_matrix(field: Field, data, cols: Optional[int] = None) -> Matrix:
    """Coerce nested sequences into a 2-D matrix over ``field``."""
    if isinstance(data, np.ndarray) and data.ndim == 2:
        rows = data.tolist()
        cols = data.shape[1] if cols is None else cols
    else:
        rows = [list(row) for row in data]
    if cols is None:
        cols = len(rows[0]) if rows else 0
    if any(len(row) != cols for row in rows):
        raise DimensionError(f"Ragged matrix: expected {cols} columns")

    if _is_tower(field):
        out = field.zeros((len(rows), cols))
        for i, row in enumerate(rows):
            for j, v in enumerate(row):
                out[i, j] = field.check(int(v))
        return out

    out = np.array(rows, dtype=np.int64).reshape(len(rows), cols)
    if out.size and (out.min() < 0 or out.max() >= field.q):
        raise FieldError(f"Matrix entries outside GF({field.q})")
    return out


def as_vector(field: Field, data) -> np.ndarray:
    if _is_tower(field):
        return field.new_vector(list(data))
    return np.asarray(data, dtype=np.int64).reshape(-1)


def transpose(M: Matrix) -> Matrix:
    return np.ascontiguousarray(M.T)


def matmul(field: Field, A: Matrix, B: Matrix) -> Matrix:
    if A.shape[1] != B.shape[0]:
        raise DimensionError(f"Cannot multiply {A.shape} by {B.shape}")
    if not _is_tower(field):
        if A.shape[1] == 0:
            return np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
        prods = field.mul_arrays(A[:, :, None], B[None, :, :])
        return np.bitwise_xor.reduce(prods, axis=1)

    out = field.zeros((A.shape[0], B.shape[1]))
    for i in range(A.shape[0]):
        for k in range(A.shape[1]):
            a = A[i, k]
            if a:
                out[i] ^= field.scale(a, B[k])
    return out


def vecmat(field: Field, v, M: Matrix) -> np.ndarray:
    """Row vector times matrix."""
    v = as_vector(field, v)
    return matmul(field, v.reshape(1, -1), M)[0]


def matvec(field: Field, M: Matrix, v) -> np.ndarray:
    v = as_vector(field, v)
    return matmul(field, M, v.reshape(-1, 1))[:, 0]


def _eliminate(field: Field, R: Matrix, r: int, c: int) -> None:
    """Clear column c in every row except the pivot row r."""
    col = R[:, c].copy()
    col[r] = 0
    if not _is_tower(field):
        if col.any():
            R ^= field.mul_arrays(col[:, None], R[r][None, :])
        return
    for i in np.nonzero(col != 0)[0]:
        R[i] ^= field.scale(col[i], R[r])


def rref(field: Field, M: Matrix) -> Tuple[Matrix, int, Tuple[int, ...]]:
    """Reduced row echelon form, smallest-index pivot first.

    Returns (R, rank, pivots); R keeps the shape of M with zero rows last.
    """
    R = as_matrix(field, M)
    rows, cols = R.shape
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c] != 0)[0]
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            R[[r, p]] = R[[p, r]]
        lead = R[r, c]
        if lead != 1:
            R[r] = field.scale(field.inv(int(lead)), R[r])
        _eliminate(field, R, r, c)
        pivots.append(c)
        r += 1
    return R, r, tuple(pivots)


def _gf2_rank(M: Matrix) -> int:
    """Rank over GF(2) with rows packed into Python ints."""
    pivots = {}
    for row in M:
        v = int("".join("1" if x else "0" for x in row) or "0", 2)
        while v:
            top = v.bit_length() - 1
            if top not in pivots:
                pivots[top] = v
                break
            v ^= pivots[top]
    return len(pivots)


def rank(field: Field, M: Matrix) -> int:
    M = as_matrix(field, M)
    if M.size == 0:
        return 0
    if not _is_tower(field) and field.w == 1:
        return _gf2_rank(M)
    return rref(field, M)[1]


def solve(field: Field, A: Matrix, b) -> Optional[np.ndarray]:
    """Any x with A x = b (free variables zero), or None when inconsistent."""
    A = as_matrix(field, A)
    b = as_vector(field, b)
    if A.shape[0] != b.shape[0]:
        raise DimensionError(f"A has {A.shape[0]} rows but b has length {b.shape[0]}")

    aug = np.concatenate([A, b.reshape(-1, 1)], axis=1)
    R, rk, pivots = rref(field, aug)
    cols = A.shape[1]
    if pivots and pivots[-1] == cols:
        return None
    x = field.zeros(cols) if _is_tower(field) else np.zeros(cols, dtype=np.int64)
    for i, c in enumerate(pivots):
        x[c] = R[i, cols]
    return x


def nullspace(field: Field, M: Matrix) -> Matrix:
    """Basis of {v : M v = 0}, one vector per row."""
    M = as_matrix(field, M)
    cols = M.shape[1]
    R, rk, pivots = rref(field, M)
    pivot_set = set(pivots)
    free = [c for c in range(cols) if c not in pivot_set]
    basis = field.zeros((len(free), cols)) if _is_tower(field) else np.zeros((len(free), cols), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for j, p in enumerate(pivots):
            # char 2: -R[j, f] == R[j, f]
            basis[i, p] = R[j, f]
    return basis


def coordinate_matrix(t: FieldTower, v: Sequence[int]) -> Matrix:
    """|v| x m matrix over the base field, one row of coordinates per element."""
    return np.array([t.coords(int(a)) for a in v], dtype=np.int64).reshape(len(v), t.m)


def rank_over_base(t: FieldTower, v: Sequence[int]) -> int:
    return rank(t.base, coordinate_matrix(t, v))


class RowBasis:
    """Incrementally grown echelon basis of a subspace of field^n."""

    def __init__(self, field: Field, n: int):
        self.field = field
        self.n = n
        self._rows: List[np.ndarray] = []
        self._pivots: List[int] = []

    def __len__(self) -> int:
        return len(self._rows)

    @property
    def rank(self) -> int:
        return len(self._rows)

    def reduce(self, v) -> np.ndarray:
        """Residual of v after clearing every basis pivot."""
        field = self.field
        v = as_vector(field, v).copy()
        if v.shape[0] != self.n:
            raise DimensionError(f"Expected length {self.n}, got {v.shape[0]}")
        for row, p in zip(self._rows, self._pivots):
            c = v[p]
            if c:
                v ^= field.scale(c, row)
        return v

    def contains(self, v) -> bool:
        return not self.reduce(v).any()

    def add(self, v) -> bool:
        """Insert v; returns True iff it enlarged the span."""
        field = self.field
        v = self.reduce(v)
        nz = np.nonzero(v != 0)[0]
        if nz.size == 0:
            return False
        p = int(nz[0])
        v = field.scale(field.inv(int(v[p])), v)
        for i, row in enumerate(self._rows):
            c = row[p]
            if c:
                self._rows[i] = row ^ field.scale(c, v)
        self._rows.append(v)
        self._pivots.append(p)
        return True

    def matrix(self) -> Matrix:
        if not self._rows:
            return self.field.zeros((0, self.n)) if _is_tower(self.field) else np.zeros((0, self.n), dtype=np.int64)
        return np.vstack(self._rows)
