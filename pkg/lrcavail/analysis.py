"""
LRCAvail Verification
Brute-force distance, availability certification, erasure experiments and the
rank estimates behind the two composite constructions.
"""

from __future__ import annotations

import itertools
import logging
import math
import time
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel

from .bounds import rate_cap
from .config import (
    ADVERSARIAL_REMAINDER_LIMIT,
    AVAILABILITY_NODE_BUDGET,
    CODEWORD_CHUNK,
    DEFAULT_TRIALS,
    EXHAUSTIVE_CODEWORD_LIMIT,
)
from .constructions import (
    BipartiteGraph,
    CompositeCode,
    LinearCode,
    build_expander_parity,
    build_wzl,
    composite_erasure_decode,
)
from .errors import BoundError, BudgetExceededError, DimensionError
from .galois import BaseField
from .linalg import rank, rank_over_base, rref
from .shortening import enumerate_local_checks

logger = logging.getLogger(__name__)


# --- Minimum distance ---

def _message_digits(start: int, stop: int, k: int, q: int) -> np.ndarray:
    """Rows are the base-q digits of start..stop-1, least significant first."""
    idx = np.arange(start, stop, dtype=np.int64)
    return (idx[:, None] // (q ** np.arange(k, dtype=np.int64))[None, :]) % q


def _weights(base: BaseField, messages: np.ndarray, G: np.ndarray) -> np.ndarray:
    words = np.zeros((messages.shape[0], G.shape[1]), dtype=np.int64)
    for i in range(G.shape[0]):
        words ^= base.mul_arrays(messages[:, i, None], G[i][None, :])
    return np.count_nonzero(words, axis=1)


def _sampled_distance(code: LinearCode, samples: int, seed: int) -> int:
    """Upper estimate from random information sets, weight <= 2 message combinations."""
    base = code.field
    G = code.generator
    k, n = G.shape
    rng = np.random.default_rng(seed)
    best = n
    for _ in range(samples):
        perm = rng.permutation(n)
        R, rk, _ = rref(base, G[:, perm])
        R = R[:rk]
        best = min(best, int(np.count_nonzero(R, axis=1).min()))
        for a, b in itertools.combinations(range(rk), 2):
            for c in range(1, base.q):
                w = int(np.count_nonzero(R[a] ^ base.scale(c, R[b])))
                best = min(best, w)
    return best


def min_distance(
    code: LinearCode,
    limit: int = EXHAUSTIVE_CODEWORD_LIMIT,
    allow_sampling: bool = False,
    samples: int = 200,
    seed: int = 0,
) -> int:
    """Minimum Hamming weight over nonzero codewords.

    Exhaustive when q^k <= limit. Beyond that, an information-set estimate is
    returned if allow_sampling is set; the estimate is an upper bound on d.
    """
    base = code.field
    G = code.generator
    k = G.shape[0]
    if k == 0:
        raise DimensionError("Zero code has no nonzero codeword")
    total = base.q ** k
    if total > limit:
        if not allow_sampling:
            raise BudgetExceededError(f"{total} codewords exceed the exhaustive limit {limit}")
        logger.warning(f"Distance of [{code.n}, {k}] code estimated from {samples} information sets")
        return _sampled_distance(code, samples, seed)

    best = code.n
    for start in range(1, total, CODEWORD_CHUNK):
        stop = min(start + CODEWORD_CHUNK, total)
        best = min(best, int(_weights(base, _message_digits(start, stop, k, base.q), G).min()))
        if best == 1:
            break
    return best


def distance_is_exact(code: LinearCode, limit: int = EXHAUSTIVE_CODEWORD_LIMIT) -> bool:
    return code.field.q ** code.k <= limit


# --- Availability ---

class CoordinateAvailability(BaseModel):
    coordinate: int
    recovering_sets: Optional[List[List[int]]] = None


class AvailabilityReport(BaseModel):
    r: int
    t: int
    passed: bool
    coordinates: List[CoordinateAvailability]

    @property
    def failures(self) -> List[int]:
        return [c.coordinate for c in self.coordinates if c.recovering_sets is None]


def _disjoint_family(candidates: List[frozenset], t: int, budget: List[int]) -> Optional[List[frozenset]]:
    chosen: List[frozenset] = []

    def extend(start: int, used: frozenset) -> bool:
        if len(chosen) == t:
            return True
        for idx in range(start, len(candidates)):
            budget[0] -= 1
            if budget[0] < 0:
                raise BudgetExceededError("Availability search exceeded its node budget")
            cand = candidates[idx]
            if used & cand:
                continue
            chosen.append(cand)
            if extend(idx + 1, used | cand):
                return True
            chosen.pop()
        return False

    return list(chosen) if extend(0, frozenset()) else None


def verify_availability(code: LinearCode, r: int, t: int, node_budget: int = AVAILABILITY_NODE_BUDGET) -> AvailabilityReport:
    """Search every coordinate for t pairwise disjoint recovering sets of size <= r."""
    checks = enumerate_local_checks(code, r)
    supports = checks.supports()
    budget = [node_budget]
    coords = []
    for i in range(code.n):
        sets = {frozenset(supports[c]) - {i} for c in checks.covering(i)}
        candidates = sorted(sets, key=lambda s: (len(s), sorted(s)))
        family = _disjoint_family(candidates, t, budget) if t > 0 else []
        coords.append(CoordinateAvailability(
            coordinate=i,
            recovering_sets=None if family is None else [sorted(s) for s in family],
        ))
    passed = all(c.recovering_sets is not None for c in coords)
    return AvailabilityReport(r=r, t=t, passed=passed, coordinates=coords)


# --- Erasures on plain linear codes ---

def erasure_correctable(code: LinearCode, E: Sequence[int]) -> bool:
    """No nonzero codeword is supported inside E."""
    E = sorted(set(int(i) for i in E))
    if not E:
        return True
    return rank(code.field, code.parity[:, E]) == len(E)


class ErasureTrialStats(BaseModel):
    e: int
    trials: int
    successes: int
    min_survivor_rank: int
    seed: int
    failing_pattern: Optional[List[int]] = None
    adversarial_pattern: Optional[List[int]] = None
    adversarial_survivor_rank: Optional[int] = None
    adversarial_success: Optional[bool] = None
    min_rank_estimate: Optional[int] = None

    @property
    def success_rate(self) -> float:
        return self.successes / self.trials if self.trials else 1.0


def _trial_rngs(seed: int, count: int) -> List[np.random.Generator]:
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(count)]


def linear_erasure_trials(code: LinearCode, e: int, trials: int = DEFAULT_TRIALS, seed: int = 0) -> ErasureTrialStats:
    """Rank-criterion erasure trials; survivor rank is k minus codewords hidden in E."""
    if not 0 <= e < code.n:
        raise DimensionError(f"Erasure count {e} must lie in [0, n={code.n})")
    successes, min_rank, failing = 0, code.k, None
    for rng in _trial_rngs(seed, trials):
        E = sorted(int(i) for i in rng.choice(code.n, size=e, replace=False))
        hidden = len(E) - (rank(code.field, code.parity[:, E]) if E else 0)
        min_rank = min(min_rank, code.k - hidden)
        if hidden == 0:
            successes += 1
        elif failing is None:
            failing = E
    return ErasureTrialStats(e=e, trials=trials, successes=successes, min_survivor_rank=min_rank, seed=seed, failing_pattern=failing)


# --- Composite codes ---

def survivor_rank(code: CompositeCode, erased: Sequence[int]) -> int:
    erased = set(int(i) for i in erased)
    return rank_over_base(code.tower, [code.beta(j) for j in range(code.n) if j not in erased])


def adversarial_block_pattern(code: CompositeCode, e: int, limit: int = ADVERSARIAL_REMAINDER_LIMIT) -> List[int]:
    """Erase whole inner blocks first, then the worst remainder inside the next block."""
    if code.kind != "concatenated":
        raise DimensionError("Block patterns need a concatenated code")
    if not 0 <= e < code.n:
        raise DimensionError(f"Erasure count {e} must lie in [0, n={code.n})")
    n_I = code.n_I
    full, rem = divmod(e, n_I)
    pattern = list(range(full * n_I))
    if rem == 0:
        return pattern

    block = range(full * n_I, (full + 1) * n_I)
    if math.comb(n_I, rem) > limit:
        return pattern + list(block)[:rem]
    worst = min(itertools.combinations(block, rem), key=lambda extra: survivor_rank(code, pattern + list(extra)))
    return pattern + list(worst)


def erasure_monte_carlo(code: CompositeCode, e: int, trials: int = DEFAULT_TRIALS, seed: int = 0) -> ErasureTrialStats:
    """Uniform e-erasure trials on one seeded codeword, decoded by interpolation."""
    if not 0 <= e < code.n:
        raise DimensionError(f"Erasure count {e} must lie in [0, n={code.n})")

    rngs = _trial_rngs(seed, trials + 1)
    message = code.random_message(rngs[0])
    word = code.encode(message)

    def attempt(erased: Sequence[int]):
        gone = set(erased)
        received = [(j, word[j]) for j in range(code.n) if j not in gone]
        outcome = composite_erasure_decode(code, received)
        return outcome.message == message, outcome.survivor_rank

    start_time = time.time()
    successes, min_rank, failing = 0, code.n_G, None
    estimate = None
    for i, rng in enumerate(rngs[1:], start=1):
        E = sorted(int(j) for j in rng.choice(code.n, size=e, replace=False))
        ok, k_prime = attempt(E)
        min_rank = min(min_rank, k_prime)
        if code.kind == "expander":
            est = expander_rank_estimate(code, E)
            estimate = est if estimate is None else min(estimate, est)
        if ok:
            successes += 1
        elif failing is None:
            failing = E
        if i % 100 == 0:
            elapsed = time.time() - start_time
            logger.info(f"[Monte Carlo] [{elapsed:6.1f}s] Trial {i}/{trials}: {successes} decoded")

    stats = ErasureTrialStats(
        e=e, trials=trials, successes=successes, min_survivor_rank=min_rank, seed=seed,
        failing_pattern=failing, min_rank_estimate=estimate,
    )
    if code.kind == "concatenated":
        pattern = adversarial_block_pattern(code, e)
        ok, k_prime = attempt(pattern)
        stats.adversarial_pattern = pattern
        stats.adversarial_survivor_rank = k_prime
        stats.adversarial_success = ok
    return stats


def theorem3_rank_estimate(n: int, e: int, gamma_e: int, checks: int) -> int:
    """Closed-form k' >= n - |E| - (checks - min(|Gamma(E)|, |E|))."""
    return n - e - (checks - min(gamma_e, e))


def expander_rank_estimate(code: CompositeCode, erased: Sequence[int]) -> int:
    """Closed-form k' for one pattern; Gamma(E) is the set of checks touching E."""
    erased = sorted(set(int(i) for i in erased))
    H = code.parity
    gamma_e = int(np.count_nonzero(np.any(H[:, erased] != 0, axis=1))) if erased else 0
    return theorem3_rank_estimate(code.n, len(erased), gamma_e, H.shape[0])


# --- Inner-block rank estimate ---

def l_star(e: int, r: int, t: int) -> int:
    """Lower estimate for the rank of the erased columns of one WZL parity block."""
    if r < 2:
        raise BoundError(f"L* needs r >= 2, got {r}")
    if e < 0:
        raise BoundError(f"erasure count must be >= 0, got {e}")
    if e <= t:
        return e
    return max(math.ceil((1 - rate_cap(r - 1, t)) * e), t)


def theorem4_dimension(n: int, d: int, r: int, t: int) -> int:
    """Dimension reachable by the concatenated code for a target distance d."""
    n_I = math.comb(r + t, t)
    if n % n_I:
        raise BoundError(f"n={n} is not a multiple of n_I={n_I}")
    if not 1 <= d <= n:
        raise BoundError(f"d={d} must lie in [1, n={n}]")
    k_I = n_I * r // (r + t)
    whole, e_I = divmod(n - d + 1, n_I)
    return k_I * whole + k_I - e_I + l_star(e_I, r, t)


class BlockRankStats(BaseModel):
    r: int
    t: int
    e: int
    trials: int
    l_star: int
    block_rank: int
    min_rank: int
    below_l_star: int


def block_rank_check(r: int, t: int, e: int, trials: int = 100, seed: int = 0) -> BlockRankStats:
    """Rank of random e-column submatrices of the WZL parity block against L*(e)."""
    inner = build_wzl(r, t)
    if not 0 <= e <= inner.n:
        raise DimensionError(f"e={e} must lie in [0, n_I={inner.n}]")
    target = l_star(e, r, t)
    min_rank, below = inner.rank, 0
    for rng in _trial_rngs(seed, trials):
        E = sorted(int(i) for i in rng.choice(inner.n, size=e, replace=False))
        rk = rank(inner.field, inner.parity[:, E]) if E else 0
        min_rank = min(min_rank, rk)
        below += rk < target
    if target > inner.rank:
        logger.warning(f"L*({e}) = {target} exceeds the block parity rank {inner.rank}")
    return BlockRankStats(r=r, t=t, e=e, trials=trials, l_star=target, block_rank=inner.rank, min_rank=min_rank, below_l_star=below)


class FullRankStats(BaseModel):
    q: int
    e: int
    trials: int
    full_rank: int

    @property
    def frequency(self) -> float:
        return self.full_rank / self.trials if self.trials else 1.0


def _split_seeds(seed: int, trials: int) -> List[Tuple[int, int]]:
    """Per-trial (pattern, parity) seeds from two independent child streams."""
    out = []
    for child in np.random.SeedSequence(seed).spawn(trials):
        pattern_seq, parity_seq = child.spawn(2)
        out.append((int(pattern_seq.generate_state(1)[0]), int(parity_seq.generate_state(1)[0])))
    return out


def full_rank_frequency(graph: BipartiteGraph, base: BaseField, e: int, trials: int = DEFAULT_TRIALS, seed: int = 0) -> FullRankStats:
    """How often the erased-column submatrix of a fresh H_E has full rank."""
    if not 0 <= e <= graph.n_left:
        raise DimensionError(f"e={e} must lie in [0, {graph.n_left}]")
    full = 0
    for pattern_seed, parity_seed in _split_seeds(seed, trials):
        rng = np.random.default_rng(pattern_seed)
        H = build_expander_parity(graph, base, parity_seed)
        E = sorted(int(i) for i in rng.choice(graph.n_left, size=e, replace=False))
        sub = H[:, E]
        sub = sub[np.any(sub != 0, axis=1)]
        if sub.size == 0 or rank(base, sub) == min(sub.shape):
            full += 1
    return FullRankStats(q=base.q, e=e, trials=trials, full_rank=full)


class VerifyReport(BaseModel):
    kind: str
    n: int
    k: int
    distance: Optional[int] = None
    distance_exact: Optional[bool] = None
    availability: Optional[AvailabilityReport] = None
    erasures: Optional[ErasureTrialStats] = None
    block_rank: Optional[BlockRankStats] = None
    passed: bool = True
