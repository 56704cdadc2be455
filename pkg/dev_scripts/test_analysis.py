"""
Distance, availability and erasure analysis.
"""

import itertools
import logging

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lrcavail.analysis import (
    _split_seeds,
    adversarial_block_pattern,
    block_rank_check,
    distance_is_exact,
    erasure_correctable,
    erasure_monte_carlo,
    expander_rank_estimate,
    full_rank_frequency,
    l_star,
    linear_erasure_trials,
    min_distance,
    survivor_rank,
    theorem3_rank_estimate,
    theorem4_dimension,
    verify_availability,
)
from lrcavail.constructions import (
    LinearCode,
    assemble_concatenated,
    assemble_expander_code,
    build_expander_parity,
    build_wzl,
    composite_erasure_decode,
    sample_biregular,
)
from lrcavail.errors import BoundError, BudgetExceededError, DimensionError
from lrcavail.galois import build_base_field, build_tower
from lrcavail.linalg import rank

GF2 = build_base_field(1)
HAMMING = LinearCode(GF2, 7, [
    [1, 0, 1, 0, 1, 0, 1],
    [0, 1, 1, 0, 0, 1, 1],
    [0, 0, 0, 1, 1, 1, 1],
])


@pytest.fixture(scope="module")
def concat22():
    return assemble_concatenated(build_tower(1, 6, seed=0), 2, 2, blocks=2, k=3)


def test_hamming_distance():
    assert HAMMING.k == 4
    assert min_distance(HAMMING) == 3
    assert distance_is_exact(HAMMING)


def test_distance_budget_and_sampling():
    code = build_wzl(4, 2)
    with pytest.raises(BudgetExceededError):
        min_distance(code, limit=100)
    estimate = min_distance(code, limit=100, allow_sampling=True, samples=20, seed=1)
    assert estimate >= min_distance(code)


def test_wzl_availability_passes_at_design_point():
    report = verify_availability(build_wzl(3, 2), 3, 2)
    assert report.passed
    assert report.failures == []
    for coord in report.coordinates:
        a, b = coord.recovering_sets
        assert not set(a) & set(b)
        assert coord.coordinate not in a + b


def test_wzl_availability_fails_above_design_point():
    report = verify_availability(build_wzl(3, 2), 3, 3)
    assert not report.passed
    assert report.failures == list(range(10))


def test_erasure_correctable_on_hamming():
    assert erasure_correctable(HAMMING, [0, 5])
    # 1 + 2 + 3 columns sum to zero: codeword 1110000 hides in {0, 1, 2}.
    assert not erasure_correctable(HAMMING, [0, 1, 2])
    assert erasure_correctable(HAMMING, [])


def test_linear_trials_below_distance_always_succeed():
    stats = linear_erasure_trials(build_wzl(2, 3), 3, trials=200, seed=3)
    assert stats.success_rate == 1.0
    assert stats.min_survivor_rank == 4
    again = linear_erasure_trials(build_wzl(2, 3), 3, trials=200, seed=3)
    assert again == stats
    with pytest.raises(DimensionError):
        linear_erasure_trials(HAMMING, 7)


def test_linear_trials_report_failures():
    stats = linear_erasure_trials(HAMMING, 4, trials=50, seed=0)
    assert stats.successes < stats.trials
    assert stats.failing_pattern is not None and len(stats.failing_pattern) == 4


def test_concatenated_monte_carlo(concat22):
    stats = erasure_monte_carlo(concat22, 8, trials=100, seed=5)
    assert stats.success_rate == 1.0
    assert stats.min_survivor_rank >= 3
    assert stats.adversarial_pattern[:6] == list(range(6))
    assert len(stats.adversarial_pattern) == 8
    assert stats.adversarial_success
    assert stats.min_rank_estimate is None


def test_adversarial_pattern_finds_hidden_codeword(concat22):
    pattern = adversarial_block_pattern(concat22, 9)
    assert pattern[:6] == list(range(6))
    assert survivor_rank(concat22, pattern) == 2
    stats = erasure_monte_carlo(concat22, 9, trials=20, seed=0)
    assert stats.adversarial_success is False
    assert stats.adversarial_survivor_rank == 2


def test_survivor_rank_of_intact_code(concat22):
    assert survivor_rank(concat22, []) == concat22.n_G


def test_theorem3_estimate():
    assert theorem3_rank_estimate(14, 4, 6, 6) == 14 - 4 - (6 - 4)
    assert theorem3_rank_estimate(14, 2, 5, 6) == 14 - 2 - 4


def test_l_star_values():
    assert l_star(5, 3, 2) == 3
    assert l_star(3, 3, 2) == 2
    assert l_star(2, 3, 2) == 2
    with pytest.raises(BoundError):
        l_star(3, 1, 2)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 40), st.integers(2, 8), st.integers(1, 4))
def test_l_star_nondecreasing(e, r, t):
    assert l_star(e + 1, r, t) >= l_star(e, r, t)


def test_theorem4_dimension():
    assert theorem4_dimension(30, 15, 3, 2) == 9
    with pytest.raises(BoundError):
        theorem4_dimension(31, 15, 3, 2)


@pytest.mark.parametrize("e", [3, 5, 6, 7])
def test_block_rank_meets_l_star(e):
    stats = block_rank_check(3, 2, e, trials=100, seed=e)
    assert stats.min_rank >= min(stats.l_star, stats.block_rank)
    assert stats.below_l_star == 0


def test_block_rank_warns_when_estimate_exceeds_rank(caplog):
    with caplog.at_level(logging.WARNING, logger="lrcavail.analysis"):
        stats = block_rank_check(3, 2, 10, trials=5, seed=0)
    assert stats.l_star > stats.block_rank
    assert "exceeds the block parity rank" in caplog.text


def test_full_rank_frequency_is_seeded():
    graph = sample_biregular(14, 3, 7, seed=7, require_girth=False)
    base = build_base_field(4)
    a = full_rank_frequency(graph, base, 4, trials=50, seed=2)
    b = full_rank_frequency(graph, base, 4, trials=50, seed=2)
    assert a == b
    assert 0.0 <= a.frequency <= 1.0
    with pytest.raises(DimensionError):
        full_rank_frequency(graph, base, 15, trials=1)


@pytest.fixture(scope="module")
def expander9():
    graph = sample_biregular(9, 2, 3, seed=4)
    base = build_base_field(4)
    H = next(H for H in (build_expander_parity(graph, base, s) for s in range(32)) if rank(base, H) == H.shape[0])
    return assemble_expander_code(build_tower(4, 9 - H.shape[0], seed=0), H, 2)


def test_wzl22_corrects_every_pair():
    code = build_wzl(2, 2)
    for E in itertools.combinations(range(code.n), 2):
        assert erasure_correctable(code, E)


def test_outer_correctability_matches_decoding_at_full_dimension():
    # With k = n_G a pattern decodes exactly when no outer codeword hides in it.
    code = assemble_concatenated(build_tower(1, 6, seed=0), 2, 2, blocks=2, k=6)
    outer = code.outer_code()
    for child in np.random.SeedSequence(31).spawn(100):
        rng = np.random.default_rng(child)
        message = code.random_message(rng)
        word = code.encode(message)
        e = int(rng.integers(1, 7))
        E = sorted(int(i) for i in rng.choice(code.n, size=e, replace=False))
        outcome = composite_erasure_decode(code, [(j, word[j]) for j in range(code.n) if j not in E])
        assert erasure_correctable(outer, E) == (outcome.message == message)


def test_composite_fails_past_n_minus_k(concat22):
    e = concat22.n - concat22.k + 1
    rng = np.random.default_rng(12)
    word = concat22.encode(concat22.random_message(rng))
    for _ in range(20):
        E = set(int(i) for i in rng.choice(concat22.n, size=e, replace=False))
        outcome = composite_erasure_decode(concat22, [(j, word[j]) for j in range(concat22.n) if j not in E])
        assert not outcome.success
        assert outcome.survivor_rank < concat22.k


def test_expander_rank_estimate_counts_touched_checks(expander9):
    H = expander9.parity
    checks = H.shape[0]
    assert expander_rank_estimate(expander9, []) == expander9.n - checks
    gamma = int(np.count_nonzero(H[:, 0]))
    assert expander_rank_estimate(expander9, [0, 0]) == theorem3_rank_estimate(expander9.n, 1, gamma, checks)


def test_expander_monte_carlo_records_rank_estimate(expander9):
    stats = erasure_monte_carlo(expander9, 3, trials=30, seed=2)
    assert isinstance(stats.min_rank_estimate, int)
    assert stats.min_rank_estimate <= expander9.n_G
    assert stats.adversarial_pattern is None


def test_split_seeds_are_independent_streams():
    pairs = _split_seeds(7, 50)
    assert pairs == _split_seeds(7, 50)
    assert all(p != q for p, q in pairs)
    patterns = {p for p, _ in pairs}
    parities = {q for _, q in pairs}
    assert len(patterns) == 50 and not patterns & parities
