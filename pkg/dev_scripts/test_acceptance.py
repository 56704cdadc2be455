"""
End-to-end acceptance checks at desk scale.

Each test pins one published property of the codes and bounds with fixed seeds.
"""

import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from lrcavail.analysis import (
    erasure_monte_carlo,
    full_rank_frequency,
    min_distance,
    verify_availability,
)
from lrcavail.bounds import (
    BoundQuery,
    corollary1_bound,
    curves,
    find_crossover,
    lemma1_delta,
    lemma1_residual,
    rate_cap,
    tbf_bound,
    wang_rawat_bound,
)
from lrcavail.constructions import (
    assemble_concatenated,
    assemble_expander_code,
    build_expander_parity,
    build_wzl,
    check_expansion,
    expander_params,
    girth_feasible,
    sample_biregular,
)
from lrcavail.errors import GraphSamplingError
from lrcavail.gabidulin import (
    LinearizedPoly,
    gab_encode,
    gab_erasure_decode,
    gabidulin_spec,
    min_rank_distance,
)
from lrcavail.galois import build_base_field, build_tower
from lrcavail.linalg import rank
from lrcavail.shortening import algorithm1, closure, enumerate_local_checks

WZL_PARAMS = [(2, 2), (3, 2), (2, 3), (4, 2)]


@pytest.mark.parametrize("r,t", WZL_PARAMS)
def test_wzl_parameters_reproduce(r, t):
    code = build_wzl(r, t)
    n = math.comb(r + t, t)
    assert code.n == n
    assert Fraction(code.k) == Fraction(n * r, r + t)
    assert min_distance(code) == t + 1
    assert verify_availability(code, r, t).passed


def test_shortening_bound_improves_on_reference_point():
    q = BoundQuery(n=24, k=12, r=3, t=2)
    assert corollary1_bound(24, 12, 3) == 8
    assert wang_rawat_bound(q) == 9
    assert tbf_bound(q) == 9


def test_shortening_bound_never_worse_on_grid():
    for n in range(2, 41):
        for r in range(2, 7):
            for t in (2, 3):
                k_max = math.floor(n * rate_cap(r, t))
                for k in range(2, k_max + 1):
                    q = BoundQuery(n=n, k=k, r=r, t=t)
                    assert corollary1_bound(n, k, r) <= min(wang_rawat_bound(q), tbf_bound(q))


@pytest.mark.parametrize("r,t", [(2, 2), (3, 2)])
def test_wzl_meets_shortening_bound(r, t):
    code = build_wzl(r, t)
    assert min_distance(code) == corollary1_bound(code.n, code.k, r)


def test_gabidulin_is_mrd_at_desk_scale():
    spec = gabidulin_spec(build_tower(1, 4, seed=0), 4, 2)
    assert min_rank_distance(spec) == 3


def test_interpolation_round_trip():
    tower = build_tower(1, 8, seed=0)
    spec = gabidulin_spec(tower, 8, 4)
    recovered = 0
    for seq in np.random.SeedSequence(2024).spawn(100):
        rng = np.random.default_rng(seq)
        f = LinearizedPoly(tuple(tower.random_element(rng) for _ in range(spec.k_G)))
        message = list(f.coeffs) + [0] * (spec.k_G - len(f.coeffs))
        word = gab_encode(spec, message)
        keep = sorted(int(i) for i in rng.choice(spec.n_G, size=spec.k_G, replace=False))
        if gab_erasure_decode(spec, {i: word[i] for i in keep}) == message:
            recovered += 1
    assert recovered == 100


def test_concatenated_construction_decodes_every_pattern():
    code = assemble_concatenated(build_tower(1, 18, seed=0), 3, 2, blocks=3, k=9)
    assert (code.n, code.k) == (30, 9)
    stats = erasure_monte_carlo(code, 14, trials=1000, seed=6)
    assert stats.success_rate == 1.0
    assert stats.min_survivor_rank >= 9
    assert stats.adversarial_success
    assert stats.adversarial_survivor_rank >= 9


def _min_expansion_ratio(graph, t, size_cap):
    """min |N(S)| / (t |S|) over left subsets of size <= size_cap."""
    best = Fraction(1)
    for s in range(1, size_cap + 1):
        for subset in itertools.combinations(range(graph.n_left), s):
            neighbours = set().union(*(set(graph.adjacency[u]) for u in subset))
            best = min(best, Fraction(len(neighbours), t * s))
    return best


def test_expander_pipeline():
    n, t, rp1 = 14, 3, 7
    assert not girth_feasible(n, t, rp1)
    with pytest.raises(GraphSamplingError):
        sample_biregular(n, t, rp1, seed=7)
    graph = sample_biregular(n, t, rp1, seed=7, max_tries=10**4, require_girth=False)
    assert graph.is_simple()

    params = expander_params(Fraction(3, n), Fraction(1, t), rp1 - 1, t)
    ratio = _min_expansion_ratio(graph, t, 3)
    assert check_expansion(graph, params.alpha, params.gamma) == (params.gamma < ratio)
    assert not check_expansion(graph, params.alpha, ratio)
    assert check_expansion(graph, params.alpha, ratio - Fraction(1, 100))

    base = build_base_field(4)
    for seed in range(32):
        H = build_expander_parity(graph, base, seed)
        if rank(base, H) == H.shape[0]:
            break
    n_G = n - H.shape[0]
    k = n_G // 2
    code = assemble_expander_code(build_tower(4, n_G, seed=7), H, k)
    stats = erasure_monte_carlo(code, n_G - k, trials=500, seed=7)
    assert stats.success_rate == 1.0

    freq = full_rank_frequency(graph, base, 4, trials=200, seed=7)
    assert freq.frequency >= 0.8


@pytest.mark.parametrize("w,e", [(4, 2), (8, 2), (8, 6)])
def test_full_rank_frequency_by_field_size(w, e):
    graph = sample_biregular(14, 3, 7, seed=7, max_tries=10**4, require_girth=False)
    freq = full_rank_frequency(graph, build_base_field(w), e, trials=200, seed=7)
    assert freq.q == 2 ** w
    assert freq.frequency >= 0.95


@pytest.mark.parametrize("t,r", [(3, 6), (2, 5)])
def test_expansion_root_solver(t, r):
    lo, hi = 1.0 / (r + 1), 1.0 - 1.0 / t
    assert abs(lemma1_delta(lo, t, r) - 1.0) < 1e-9
    roots = []
    for gamma in np.linspace(lo, hi, 20, endpoint=False):
        delta = lemma1_delta(float(gamma), t, r)
        assert abs(lemma1_residual(delta, float(gamma), t, r)) < 1e-12
        roots.append(delta)
    assert all(b <= a + 1e-12 for a, b in zip(roots, roots[1:]))


@pytest.mark.parametrize("r,t", [(6, 3), (5, 2)])
def test_rate_curves_shape(r, t):
    rows = curves(r, t, 200)
    assert len(rows) == 200
    assert all(row.upper_new <= row.upper_tbf + 1e-12 for row in rows)
    delta_c = find_crossover(rows)
    assert delta_c is not None
    before = [row for row in rows if row.delta < delta_c]
    after = [row for row in rows if row.delta >= delta_c]
    assert before and after
    assert all(row.lower_concat >= row.lower_expander - 1e-12 for row in before)
    assert any(row.lower_concat > row.lower_expander for row in before)
    assert all(row.lower_expander >= row.lower_concat - 1e-12 for row in after)
    assert after[0].lower_expander > after[0].lower_concat


@pytest.mark.parametrize("r,t", WZL_PARAMS)
def test_shortening_set_guarantees(r, t):
    code = build_wzl(r, t)
    checks = enumerate_local_checks(code, r)
    for s in range(1, code.n - code.k + 1):
        result = algorithm1(checks, s, code.n, r, t=t)
        assert len(result.I) <= 1 + (r - 1) * s
        assert len(closure(code, result.I)) >= min(1 + r * s, code.n)
