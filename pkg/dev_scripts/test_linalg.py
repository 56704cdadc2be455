"""
Exact elimination over base fields and extension towers.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lrcavail.errors import DimensionError, FieldError
from lrcavail.galois import build_base_field, build_tower
from lrcavail.linalg import (
    RowBasis,
    as_matrix,
    coordinate_matrix,
    matmul,
    matvec,
    nullspace,
    rank,
    rank_over_base,
    rref,
    solve,
    transpose,
    vecmat,
)

GF2 = build_base_field(1)
GF16 = build_base_field(4)
TOWER = build_tower(2, 3, seed=1)


def random_matrix(field, rows, cols, seed):
    rng = np.random.default_rng(seed)
    return rng.integers(0, field.q, size=(rows, cols)).astype(np.int64)


def test_rref_known_binary_matrix():
    M = as_matrix(GF2, [[1, 1, 0, 1], [1, 0, 1, 1], [0, 1, 1, 0]])
    R, rk, pivots = rref(GF2, M)
    assert rk == 2
    assert pivots == (0, 1)
    assert R.tolist() == [[1, 0, 1, 1], [0, 1, 1, 0], [0, 0, 0, 0]]


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 8), st.integers(1, 8), st.integers(0, 10**6))
def test_gf2_fast_rank_matches_rref(rows, cols, seed):
    M = random_matrix(GF2, rows, cols, seed)
    assert rank(GF2, M) == rref(GF2, M)[1]


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(1, 7), st.integers(0, 10**6))
def test_nullspace_rank_nullity(rows, cols, seed):
    M = random_matrix(GF16, rows, cols, seed)
    N = nullspace(GF16, M)
    assert N.shape == (cols - rank(GF16, M), cols)
    if N.shape[0]:
        assert not matmul(GF16, M, transpose(N)).any()
        assert rank(GF16, N) == N.shape[0]


def test_nullspace_over_tower():
    rng = np.random.default_rng(3)
    M = as_matrix(TOWER, [[TOWER.random_element(rng) for _ in range(5)] for _ in range(2)])
    N = nullspace(TOWER, M)
    assert N.shape == (3, 5)
    assert not any(matmul(TOWER, M, transpose(N)).ravel())


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6), st.integers(0, 10**6))
def test_solve_consistent_system(rows, cols, seed):
    A = random_matrix(GF16, rows, cols, seed)
    x = random_matrix(GF16, 1, cols, seed + 1)[0]
    b = matvec(GF16, A, x)
    y = solve(GF16, A, b)
    assert y is not None
    assert matvec(GF16, A, y).tolist() == b.tolist()


def test_solve_inconsistent_and_mismatched():
    A = as_matrix(GF2, [[1, 1], [1, 1]])
    assert solve(GF2, A, [0, 1]) is None
    with pytest.raises(DimensionError):
        solve(GF2, A, [1, 0, 1])


def test_solve_over_tower():
    rng = np.random.default_rng(9)
    while True:
        A = as_matrix(TOWER, [[TOWER.random_element(rng) for _ in range(3)] for _ in range(3)])
        if rank(TOWER, A) == 3:
            break
    x = TOWER.new_vector([TOWER.random_element(rng) for _ in range(3)])
    b = matvec(TOWER, A, x)
    assert list(solve(TOWER, A, b)) == list(x)


def test_as_matrix_validation():
    with pytest.raises(FieldError):
        as_matrix(GF2, [[0, 2]])
    with pytest.raises(DimensionError):
        as_matrix(GF2, [[0, 1], [1]])
    with pytest.raises(DimensionError):
        matmul(GF2, as_matrix(GF2, [[1, 0]]), as_matrix(GF2, [[1, 0]]))
    assert as_matrix(GF2, [], cols=4).shape == (0, 4)


def test_row_basis_tracks_span():
    basis = RowBasis(GF2, 4)
    assert basis.add([1, 1, 0, 0])
    assert basis.add([0, 1, 1, 0])
    assert not basis.add([1, 0, 1, 0])
    assert basis.contains([1, 0, 1, 0])
    assert not basis.contains([0, 0, 0, 1])
    assert basis.rank == 2
    assert rank(GF2, basis.matrix()) == 2
    with pytest.raises(DimensionError):
        basis.reduce([1, 0])


def test_rank_over_base_of_monomials():
    points = [TOWER.monomial(i) for i in range(TOWER.m)]
    assert coordinate_matrix(TOWER, points).tolist() == np.eye(3, dtype=int).tolist()
    assert rank_over_base(TOWER, points) == 3
    # x and c*x are dependent over the base field.
    assert rank_over_base(TOWER, [points[1], TOWER.scale_element(3, points[1])]) == 1


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([GF2, GF16]), st.integers(1, 7), st.integers(1, 7), st.integers(0, 10**6))
def test_rank_is_transpose_invariant(field, rows, cols, seed):
    M = random_matrix(field, rows, cols, seed)
    assert rank(field, M) == rank(field, transpose(M))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([GF2, GF16]), st.integers(1, 7), st.integers(1, 7), st.integers(0, 10**6))
def test_rref_is_idempotent(field, rows, cols, seed):
    R, rk, pivots = rref(field, random_matrix(field, rows, cols, seed))
    R2, rk2, pivots2 = rref(field, R)
    assert R2.tolist() == R.tolist()
    assert (rk2, pivots2) == (rk, pivots)


def test_vecmat_over_tower_embeds_base_entries():
    rng = np.random.default_rng(5)
    v = [TOWER.random_element(rng) for _ in range(3)]
    B = random_matrix(TOWER.base, 3, 4, 9)
    out = vecmat(TOWER, v, as_matrix(TOWER, B))
    for j in range(4):
        expected = 0
        for i in range(3):
            expected ^= TOWER.scale_element(int(B[i, j]), v[i])
        assert out[j] == expected
