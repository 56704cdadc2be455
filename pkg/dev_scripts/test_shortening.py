"""
Local checks, closures, the greedy shortening set and the shortening bounds.
"""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lrcavail.bounds import griesmer_d, griesmer_k
from lrcavail.constructions import LinearCode, block_diagonal, build_wzl
from lrcavail.errors import BoundError, BudgetExceededError, ShorteningError
from lrcavail.galois import build_base_field
from lrcavail.shortening import (
    algorithm1,
    bound_table,
    closure,
    enumerate_local_checks,
    sub_lrc_size_bound,
    theorem1_d_bound,
    theorem1_k_bound,
    theorem2_bounds,
)

GF2 = build_base_field(1)


def test_wzl22_local_checks():
    checks = enumerate_local_checks(build_wzl(2, 2), 2)
    assert checks.supports() == [(0, 1, 2), (0, 3, 4), (1, 3, 5), (2, 4, 5)]
    assert checks.covering(0) == [0, 1]


def test_local_check_budget():
    with pytest.raises(BudgetExceededError):
        enumerate_local_checks(build_wzl(3, 2), 3, budget=10)


def test_closure_of_wzl22_sets():
    code = build_wzl(2, 2)
    # A check support minus one coordinate pins the remaining one.
    assert closure(code, [1, 2]) == (0, 1, 2)
    # {2, 3, 4} is an information set.
    assert closure(code, [2, 3, 4]) == tuple(range(6))
    assert closure(code, []) == ()
    with pytest.raises(ShorteningError):
        closure(code, [6])


def test_algorithm1_on_wzl22():
    code = build_wzl(2, 2)
    result = algorithm1(enumerate_local_checks(code, 2), 2, code.n, 2, t=2)
    assert result.X == [0, 1]
    assert result.I == [2, 3, 4]
    assert result.J == [0, 1, 2, 3, 4]
    assert result.j == 0 and result.size_bound is None
    assert len(closure(code, result.I)) >= 1 + 2 * 2


def test_algorithm1_records_closed_sub_code():
    wzl = build_wzl(2, 2)
    code = LinearCode(GF2, 12, block_diagonal(wzl.parity, 2))
    result = algorithm1(enumerate_local_checks(code, 2), 4, code.n, 2, t=2)
    assert result.X == [0, 1, 2, 3, 4]
    assert (result.j, result.s1, result.l) == (4, 3, 5)
    assert result.I == [3, 4, 5, 7, 8]
    assert result.size_bound == pytest.approx(float(sub_lrc_size_bound(3, 4, 2, 2)))
    assert sub_lrc_size_bound(3, 4, 2, 2) == Fraction(38, 7)


def test_algorithm1_runs_out_of_checks():
    code = build_wzl(2, 2)
    checks = enumerate_local_checks(code, 2)
    with pytest.raises(ShorteningError):
        algorithm1(checks, 4, code.n, 2)
    with pytest.raises(ShorteningError):
        algorithm1(checks, 0, code.n, 2)


def test_theorem1_bounds():
    assert theorem1_k_bound(3, 7, 24, 8) == 3 + (24 - 7 - 8 + 1)
    assert theorem1_d_bound(3, 7, 24, 12) == 24 - 7 - 9 + 1
    with pytest.raises(BoundError):
        theorem1_k_bound(3, 20, 24, 8)
    with pytest.raises(BoundError):
        theorem1_d_bound(12, 14, 24, 12)
    with pytest.raises(BoundError):
        theorem1_d_bound(5, 4, 24, 12)


def test_theorem2_closed_forms():
    bounds = theorem2_bounds(24, 12, 8, 3)
    assert bounds.d_upper == 24 - 12 + 1 - (12 - 2) // (3 - 1)
    assert bounds.k_upper == 24 - 8 + 1 - (24 - 8 - 1) // 3
    assert (bounds.s_d, bounds.s_k) == (5, 5)
    assert bounds.shortening_applicable


def test_theorem2_with_griesmer_oracles_is_tighter():
    sing = theorem2_bounds(24, 12, 8, 3)
    gries = theorem2_bounds(24, 12, 8, 3, k_oracle=griesmer_k, d_oracle=griesmer_d)
    assert gries.d_upper <= sing.d_upper
    assert gries.k_upper <= sing.k_upper


def test_theorem2_preconditions_and_fallback():
    with pytest.raises(BoundError):
        theorem2_bounds(10, 5, 3, 1)
    fallback = theorem2_bounds(4, 1, 4, 3)
    assert not fallback.shortening_applicable
    assert fallback.s_k is None and fallback.s_d is None


def test_bound_table_rows():
    rows = bound_table(24, 12, 8, 3, s_max=6)
    assert [row.s for row in rows] == list(range(1, 7))
    assert rows[4].k_term == 12 and rows[4].d_term == 8
    assert rows[5].k_term is None and rows[5].d_term is None


def _brute_closure(code, I):
    G = code.generator
    k = G.shape[0]
    fixed = set(range(code.n))
    for m in range(1, 2**k):
        u = np.array([(m >> i) & 1 for i in range(k)])
        word = (u @ G) % 2
        if not word[list(I)].any():
            fixed -= set(np.nonzero(word)[0].tolist())
    return tuple(sorted(fixed))


@pytest.mark.parametrize("r,t", [(2, 2), (3, 2), (2, 3), (4, 2)])
def test_algorithm1_guarantees_on_wzl(r, t):
    code = build_wzl(r, t)
    checks = enumerate_local_checks(code, r)
    for s in range(1, code.n - code.k + 1):
        result = algorithm1(checks, s, code.n, r, t=t)
        assert len(result.I) <= 1 + (r - 1) * s
        cl = closure(code, result.I)
        assert cl == _brute_closure(code, result.I)
        assert set(result.J) <= set(cl)
        assert len(cl) >= min(1 + r * s, code.n)


@settings(max_examples=150, deadline=None)
@given(st.integers(4, 40), st.data())
def test_theorem2_d_bound_never_above_singleton(n, data):
    k = data.draw(st.integers(1, n))
    d = data.draw(st.integers(1, n - k + 1))
    r = data.draw(st.integers(2, 6))
    assert theorem2_bounds(n, k, d, r).d_upper <= n - k + 1
    assert theorem2_bounds(n, k, d, r, k_oracle=griesmer_k, d_oracle=griesmer_d).d_upper <= n - k + 1
