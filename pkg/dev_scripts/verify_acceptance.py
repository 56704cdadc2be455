"""
Walk the desk-scale acceptance checks and print timings.

Run from the repo root: python dev_scripts/verify_acceptance.py
"""
import os
import sys
import time
from fractions import Fraction

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from lrcavail.analysis import erasure_monte_carlo, full_rank_frequency, min_distance, verify_availability
from lrcavail.bounds import BoundQuery, corollary1_bound, curves, find_crossover, tbf_bound, wang_rawat_bound, yaakobi_bound
from lrcavail.constructions import (
    assemble_concatenated,
    assemble_expander_code,
    build_expander_parity,
    build_wzl,
    check_expansion,
    expander_params,
    sample_biregular,
)
from lrcavail.gabidulin import gabidulin_spec, min_rank_distance
from lrcavail.galois import build_base_field, build_tower
from lrcavail.linalg import rank
from lrcavail.shortening import algorithm1, closure, enumerate_local_checks

STEPS = []


def step(name):
    def wrap(fn):
        STEPS.append((name, fn))
        return fn
    return wrap


@step("WZL parameters")
def wzl_parameters():
    for r, t in [(2, 2), (3, 2), (2, 3), (4, 2)]:
        code = build_wzl(r, t)
        d = min_distance(code)
        ok = verify_availability(code, r, t).passed
        print(f"    WZL({r},{t}): n={code.n} k={code.k} d={d} availability={'pass' if ok else 'FAIL'}")
        assert d == t + 1 and ok


@step("Bounds at (24, 12, 3, 2)")
def reference_bounds():
    q = BoundQuery(n=24, k=12, r=3, t=2)
    values = (wang_rawat_bound(q), tbf_bound(q), yaakobi_bound(q), corollary1_bound(24, 12, 3))
    print(f"    wang_rawat={values[0]} tbf={values[1]} yaakobi={values[2]} corollary1={values[3]}")
    assert values == (9, 9, 9, 8)


@step("Gabidulin MRD (m=4, n=4, k=2)")
def gabidulin_mrd():
    assert min_rank_distance(gabidulin_spec(build_tower(1, 4), 4, 2)) == 3


@step("Concatenated (3, 2) x 3 blocks, 14 erasures")
def concatenated():
    code = assemble_concatenated(build_tower(1, 18), 3, 2, blocks=3, k=9)
    stats = erasure_monte_carlo(code, 14, trials=1000, seed=6)
    print(f"    success={stats.success_rate:.3f} min k'={stats.min_survivor_rank} "
          f"adversarial k'={stats.adversarial_survivor_rank}")
    assert stats.success_rate == 1.0 and stats.adversarial_success


@step("Expander pipeline (n=14, t=3, r+1=7, q=16)")
def expander():
    graph = sample_biregular(14, 3, 7, seed=7, require_girth=False)
    params = expander_params(Fraction(3, 14), Fraction(1, 3), 6, 3)
    expands = check_expansion(graph, params.alpha, params.gamma)
    print(f"    expansion at alpha={params.alpha} gamma={params.gamma}: {expands}")
    base = build_base_field(4)
    H = next(H for H in (build_expander_parity(graph, base, s) for s in range(32)) if rank(base, H) == H.shape[0])
    n_G = 14 - H.shape[0]
    code = assemble_expander_code(build_tower(4, n_G, seed=7), H, n_G // 2)
    stats = erasure_monte_carlo(code, n_G - code.k, trials=500, seed=7)
    freq = full_rank_frequency(graph, base, 4, trials=1000, seed=7)
    print(f"    girth>4={graph.has_girth_above_4()} success={stats.success_rate:.3f} full-rank={freq.frequency:.3f}")
    assert stats.success_rate == 1.0


@step("Full-rank frequency at q=16 and q=256")
def full_rank_by_field():
    graph = sample_biregular(14, 3, 7, seed=7, max_tries=10**4, require_girth=False)
    for w in (4, 8):
        base = build_base_field(w)
        freqs = [full_rank_frequency(graph, base, e, trials=1000, seed=7).frequency for e in (2, 4, 6)]
        print(f"    q={base.q}: " + " ".join(f"e={e}:{f:.3f}" for e, f in zip((2, 4, 6), freqs)))
        assert min(freqs) >= 0.85


@step("Rate curves crossover")
def rate_curves():
    for r, t in [(6, 3), (5, 2)]:
        rows = curves(r, t, 200)
        delta_c = find_crossover(rows)
        print(f"    (r={r}, t={t}): crossover delta_c={delta_c}")
        assert delta_c is not None
        after = [row for row in rows if row.delta >= delta_c]
        assert after[0].lower_expander > after[0].lower_concat
        assert all(row.upper_new <= row.upper_tbf + 1e-12 for row in rows)


@step("Shortening sets on WZL codes")
def shortening_sets():
    for r, t in [(2, 2), (3, 2), (2, 3), (4, 2)]:
        code = build_wzl(r, t)
        checks = enumerate_local_checks(code, r)
        for s in range(1, code.n - code.k + 1):
            result = algorithm1(checks, s, code.n, r, t=t)
            cl = closure(code, result.I)
            assert len(result.I) <= 1 + (r - 1) * s
            assert set(result.J) <= set(cl)
            assert len(cl) >= min(1 + r * s, code.n)


def main() -> int:
    failures = []
    for name, fn in STEPS:
        start = time.time()
        try:
            fn()
            status = "ok"
        except AssertionError as exc:
            failures.append(name)
            status = f"FAILED {exc}"
        print(f"[{time.time() - start:7.2f}s] {name}: {status}")
    print(f"{len(failures)} failed: {failures}" if failures else "All acceptance checks passed.")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
