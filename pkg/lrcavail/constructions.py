"""
LRCAvail Code Builders
WZL availability codes, random biregular graphs and the two composite codes:
Gabidulin outer code followed by an expander code C_E, or followed by
block-wise WZL encoding.
"""

from __future__ import annotations

import itertools
import logging
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np

from .config import DEFAULT_SAMPLER_TRIES, EXPANSION_MAX_SUBSET, EXPANSION_SUBSET_BUDGET, WZL_MAX_LENGTH
from .errors import BudgetExceededError, ConstructionError, DimensionError, GraphSamplingError
from .gabidulin import GabidulinSpec, gab_encode, gabidulin_spec, moore_interpolate, select_independent
from .galois import BaseField, ExtElement, FieldTower, build_base_field
from .linalg import Field, Matrix, as_matrix, nullspace, rank, rref, vecmat

logger = logging.getLogger(__name__)


def _as_fraction(x: Union[int, float, Fraction]) -> Fraction:
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10**9)
    return Fraction(x)


# --- Linear codes ---

@dataclass(eq=False)
class LinearCode:
    """A length-n code given by a (possibly redundant) parity-check matrix."""

    field: Field
    n: int
    parity: Matrix
    kind: str = "raw"
    claimed_r: Optional[int] = None
    claimed_t: Optional[int] = None
    claimed_d: Optional[int] = None

    def __post_init__(self):
        self.parity = as_matrix(self.field, self.parity, cols=self.n)

    @classmethod
    def from_generator(cls, field: Field, generator, **meta) -> "LinearCode":
        G = as_matrix(field, generator)
        if rank(field, G) != G.shape[0]:
            raise DimensionError("Generator rows are not independent")
        return cls(field, G.shape[1], nullspace(field, G), **meta)

    @cached_property
    def rank(self) -> int:
        return rank(self.field, self.parity)

    @property
    def k(self) -> int:
        return self.n - self.rank

    @cached_property
    def generator(self) -> Matrix:
        """Systematic generator; identity on the non-pivot columns of rref(parity)."""
        return nullspace(self.field, self.parity)


def wzl_coordinates(r: int, t: int) -> List[Tuple[int, ...]]:
    return list(itertools.combinations(range(r + t), t))


def build_wzl(r: int, t: int) -> LinearCode:
    """Binary (r, t) availability code on the t-subsets of an (r+t)-set.

    One check per (t-1)-subset S, supported on the r+1 coordinates containing S.
    """
    if r < 1 or t < 1:
        raise ConstructionError(f"WZL needs r >= 1 and t >= 1, got r={r}, t={t}")
    n = math.comb(r + t, t)
    if n > WZL_MAX_LENGTH:
        raise ConstructionError(f"WZL({r},{t}) has length {n} > {WZL_MAX_LENGTH}")

    coords = wzl_coordinates(r, t)
    index = {T: j for j, T in enumerate(coords)}
    checks = list(itertools.combinations(range(r + t), t - 1))
    H = np.zeros((len(checks), n), dtype=np.int64)
    for i, S in enumerate(checks):
        for x in range(r + t):
            if x not in S:
                H[i, index[tuple(sorted(S + (x,)))]] = 1

    return LinearCode(build_base_field(1), n, H, kind="wzl", claimed_r=r, claimed_t=t, claimed_d=t + 1)


def wzl_recovering_sets(r: int, t: int) -> Dict[int, List[Tuple[int, ...]]]:
    """For every coordinate T, the t recovering sets given by dropping one element of T."""
    coords = wzl_coordinates(r, t)
    index = {T: j for j, T in enumerate(coords)}
    out: Dict[int, List[Tuple[int, ...]]] = {}
    for j, T in enumerate(coords):
        sets = []
        for drop in T:
            S = tuple(x for x in T if x != drop)
            members = [index[tuple(sorted(S + (x,)))] for x in range(r + t) if x not in S]
            sets.append(tuple(sorted(i for i in members if i != j)))
        out[j] = sets
    return out


# --- Bipartite graphs ---

@dataclass(frozen=True)
class BipartiteGraph:
    n_left: int
    n_right: int
    adjacency: Tuple[Tuple[int, ...], ...]

    def neighbors(self, left: Sequence[int]) -> set:
        out = set()
        for u in left:
            out.update(self.adjacency[u])
        return out

    def right_adjacency(self) -> List[List[int]]:
        out: List[List[int]] = [[] for _ in range(self.n_right)]
        for u, adj in enumerate(self.adjacency):
            for v in adj:
                out[v].append(u)
        return out

    def left_degrees(self) -> List[int]:
        return [len(adj) for adj in self.adjacency]

    def right_degrees(self) -> List[int]:
        return [len(adj) for adj in self.right_adjacency()]

    def is_simple(self) -> bool:
        return all(len(set(adj)) == len(adj) for adj in self.adjacency)

    def has_girth_above_4(self) -> bool:
        """No two left vertices share two right neighbors."""
        seen = set()
        for adj in self.right_adjacency():
            for pair in itertools.combinations(sorted(adj), 2):
                if pair in seen:
                    return False
                seen.add(pair)
        return True

    def to_dict(self) -> dict:
        return {"n_left": self.n_left, "n_right": self.n_right, "adjacency": [list(a) for a in self.adjacency]}


def girth_feasible(n: int, t: int, rp1: int) -> bool:
    """Pair-counting condition for a 4-cycle-free (t, rp1)-biregular graph.

    Each left vertex uses C(t, 2) right pairs and no pair may be used twice.
    """
    if rp1 < 1 or (n * t) % rp1:
        return False
    n_right = n * t // rp1
    return n * math.comb(t, 2) <= math.comb(n_right, 2)


def sample_biregular(
    n: int,
    t: int,
    rp1: int,
    seed: int,
    max_tries: int = DEFAULT_SAMPLER_TRIES,
    require_girth: bool = True,
) -> BipartiteGraph:
    """Configuration-model (t, rp1)-biregular graph, resampled until simple and girth > 4."""
    if n < 1 or t < 1 or rp1 < 1:
        raise ConstructionError(f"Invalid graph parameters n={n}, t={t}, rp1={rp1}")
    if (n * t) % rp1:
        raise ConstructionError(f"rp1={rp1} does not divide n*t={n * t}")
    if t > n * t // rp1:
        raise GraphSamplingError(f"Left degree {t} exceeds the {n * t // rp1} right vertices")
    if require_girth and not girth_feasible(n, t, rp1):
        raise GraphSamplingError(
            f"No (t={t}, r+1={rp1}) biregular graph on {n} left vertices has girth > 4"
        )

    n_right = n * t // rp1
    rng = np.random.default_rng(seed)
    start_time = time.time()

    def log_progress(attempt: int, message: str):
        elapsed = time.time() - start_time
        logger.info(f"[Sampler] [{elapsed:6.1f}s] Try {attempt}/{max_tries}: {message}")

    for attempt in range(1, max_tries + 1):
        G = nx.bipartite.configuration_model([t] * n, [rp1] * n_right, seed=rng)
        adjacency = tuple(tuple(sorted(v - n for _, v in G.edges(u))) for u in range(n))
        graph = BipartiteGraph(n, n_right, adjacency)
        if not graph.is_simple():
            continue
        if require_girth and not graph.has_girth_above_4():
            if attempt % 1000 == 0:
                log_progress(attempt, "still rejecting 4-cycles")
            continue
        log_progress(attempt, "accepted")
        return graph

    raise GraphSamplingError(f"No admissible graph in {max_tries} tries (n={n}, t={t}, rp1={rp1})")


@dataclass(frozen=True)
class ExpanderParams:
    alpha: Fraction
    gamma: Fraction
    r: int
    t: int

    @property
    def beta(self) -> Fraction:
        return self.t * (1 - self.gamma) - 1


def expander_params(alpha, gamma, r: int, t: int) -> ExpanderParams:
    alpha, gamma = _as_fraction(alpha), _as_fraction(gamma)
    if not 0 < alpha <= 1:
        raise ConstructionError(f"alpha must lie in (0, 1], got {alpha}")
    if not Fraction(1, r + 1) <= gamma < 1 - Fraction(1, t):
        raise ConstructionError(f"gamma must lie in [1/(r+1), 1-1/t), got {gamma}")
    return ExpanderParams(alpha, gamma, r, t)


def expansion_witness(
    g: BipartiteGraph,
    alpha,
    gamma,
    max_subset: int = EXPANSION_MAX_SUBSET,
    budget: int = EXPANSION_SUBSET_BUDGET,
) -> Optional[Tuple[int, ...]]:
    """First left subset of size <= alpha*n_left that fails to expand, or None."""
    alpha, gamma = _as_fraction(alpha), _as_fraction(gamma)
    size_cap = math.floor(alpha * g.n_left)
    if size_cap > max_subset:
        raise BudgetExceededError(f"Subset size {size_cap} exceeds the exhaustive cap {max_subset}")
    total = sum(math.comb(g.n_left, s) for s in range(1, size_cap + 1))
    if total > budget:
        raise BudgetExceededError(f"{total} subsets exceed the expansion budget {budget}")

    t = max(g.left_degrees(), default=0)
    masks = [sum(1 << v for v in adj) for adj in g.adjacency]
    for s in range(1, size_cap + 1):
        need = t * gamma * s
        for subset in itertools.combinations(range(g.n_left), s):
            union = 0
            for u in subset:
                union |= masks[u]
            if bin(union).count("1") <= need:
                return subset
    return None


def check_expansion(g: BipartiteGraph, alpha, gamma, **budget) -> bool:
    return expansion_witness(g, alpha, gamma, **budget) is None


def build_expander_parity(g: BipartiteGraph, base: BaseField, seed: int) -> Matrix:
    """H_E: one row per right vertex, uniform nonzero entries on its edges."""
    rng = np.random.default_rng(seed)
    H = np.zeros((g.n_right, g.n_left), dtype=np.int64)
    for v, adj in enumerate(g.right_adjacency()):
        cols = sorted(adj)
        H[v, cols] = rng.integers(1, base.q, size=len(cols))
    return H


# --- Composite codes ---

@dataclass(eq=False)
class CompositeCode:
    """Gabidulin code over F_{q^m} followed by a base-field linear map to length n."""

    kind: str
    tower: FieldTower
    gab: GabidulinSpec
    outer_map: Matrix
    parity: Matrix
    r: int
    t: int
    n_I: Optional[int] = None
    k_I: Optional[int] = None
    blocks: Optional[int] = None
    provenance: Dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return int(self.outer_map.shape[1])

    @property
    def n_G(self) -> int:
        return self.gab.n_G

    @property
    def k(self) -> int:
        return self.gab.k_G

    @cached_property
    def _outer_over_tower(self) -> Matrix:
        # Base-field entries embed as constant extension elements.
        return as_matrix(self.tower, self.outer_map)

    @cached_property
    def betas(self) -> List[ExtElement]:
        """beta_j = sum_i outer_map[i, j] * alpha_i, the point coordinate j evaluates f at."""
        return [int(b) for b in vecmat(self.tower, self.gab.eval_points, self._outer_over_tower)]

    def beta(self, j: int) -> ExtElement:
        if not 0 <= j < self.n:
            raise DimensionError(f"Coordinate {j} outside [0, {self.n})")
        return self.betas[j]

    def outer_code(self) -> LinearCode:
        kind = "wzl_blocks" if self.kind == "concatenated" else "expander"
        return LinearCode(self.tower.base, self.n, self.parity, kind=kind, claimed_r=self.r, claimed_t=self.t)

    def encode(self, message: Sequence[ExtElement]) -> List[ExtElement]:
        c_G = gab_encode(self.gab, message)
        return [int(x) for x in vecmat(self.tower, c_G, self._outer_over_tower)]

    def random_message(self, rng: np.random.Generator) -> List[ExtElement]:
        return [self.tower.random_element(rng) for _ in range(self.k)]


def assemble_expander_code(tower: FieldTower, parity, k: int, eval_points=None) -> CompositeCode:
    base = tower.base
    H = as_matrix(base, parity)
    _, rho, _ = rref(base, H)
    if rho < H.shape[0]:
        raise ConstructionError(f"Parity matrix is rank deficient ({rho} < {H.shape[0]})")
    n = H.shape[1]
    n_G = n - rho
    if n_G > tower.m:
        raise ConstructionError(f"n_G={n_G} exceeds extension degree m={tower.m}")
    if not 1 <= k <= n_G:
        raise ConstructionError(f"k={k} must lie in [1, n_G={n_G}]")

    gab = gabidulin_spec(tower, n_G, k, eval_points)
    col_weights = np.count_nonzero(H, axis=0)
    row_weights = np.count_nonzero(H, axis=1)
    t = int(col_weights.max()) if H.size else 0
    r = int(row_weights.max()) - 1 if H.size else 0
    return CompositeCode("expander", tower, gab, nullspace(base, H), H, r=r, t=t)


def block_diagonal(block: Matrix, blocks: int) -> Matrix:
    rows, cols = block.shape
    out = np.zeros((rows * blocks, cols * blocks), dtype=np.int64)
    for b in range(blocks):
        out[b * rows:(b + 1) * rows, b * cols:(b + 1) * cols] = block
    return out


def assemble_concatenated(tower: FieldTower, r: int, t: int, blocks: int, k: int, eval_points=None) -> CompositeCode:
    if tower.base.w != 1:
        raise ConstructionError("Concatenated construction needs a binary base field")
    if blocks < 1:
        raise ConstructionError(f"blocks must be >= 1, got {blocks}")
    inner = build_wzl(r, t)
    n_I, k_I = inner.n, inner.k
    n_G = blocks * k_I
    if n_G > tower.m:
        raise ConstructionError(f"n_G={n_G} exceeds extension degree m={tower.m}")
    if not 1 <= k <= n_G:
        raise ConstructionError(f"k={k} must lie in [1, n_G={n_G}]")

    gab = gabidulin_spec(tower, n_G, k, eval_points)
    outer_map = block_diagonal(inner.generator, blocks)
    parity = block_diagonal(inner.parity, blocks)
    return CompositeCode("concatenated", tower, gab, outer_map, parity, r=r, t=t, n_I=n_I, k_I=k_I, blocks=blocks)


@dataclass
class DecodeOutcome:
    message: Optional[List[ExtElement]]
    survivor_rank: int

    @property
    def success(self) -> bool:
        return self.message is not None


def composite_erasure_decode(code: CompositeCode, received: Sequence[Tuple[int, ExtElement]]) -> DecodeOutcome:
    """Interpolate f from surviving coordinates whose beta points are independent."""
    indices = [int(i) for i, _ in received]
    if len(set(indices)) != len(indices):
        raise DimensionError("Duplicate indices in received symbols")
    if any(not 0 <= i < code.n for i in indices):
        raise DimensionError(f"Received index outside [0, {code.n})")

    t = code.tower
    points = [code.beta(i) for i in indices]
    picks = select_independent(t, points)
    if len(picks) < code.k:
        return DecodeOutcome(None, len(picks))

    chosen = picks[: code.k]
    f = moore_interpolate(t, [points[i] for i in chosen], [int(received[i][1]) for i in chosen])
    message = list(f.coeffs) + [0] * (code.k - len(f.coeffs))
    return DecodeOutcome(message, len(picks))
