"""
Linearized polynomials and Gabidulin codes.

A codeword is (f(a_1), ..., f(a_n)) for a linearized polynomial f of q-degree
below k, evaluated at base-field independent points a_i. Only erasures are
decoded: k independent survivors determine f through the Moore system.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Iterable, List, Mapping, Optional, Sequence, Tuple

from .config import RANK_DISTANCE_LIMIT
from .errors import BudgetExceededError, ConstructionError, DimensionError, InternalError
from .galois import ExtElement, FieldTower
from .linalg import RowBasis, as_matrix, rank_over_base, solve

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LinearizedPoly:
    """sum_i coeffs[i] * x^(q^i)."""

    coeffs: Tuple[ExtElement, ...] = ()

    def __post_init__(self):
        coeffs = [int(c) for c in self.coeffs]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coeffs", tuple(coeffs))

    @property
    def q_degree(self) -> int:
        """-1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs


@dataclass(frozen=True, eq=False)
class GabidulinSpec:
    tower: FieldTower
    n_G: int
    k_G: int
    eval_points: Tuple[ExtElement, ...]

    def __post_init__(self):
        object.__setattr__(self, "eval_points", tuple(int(a) for a in self.eval_points))
        if not 0 <= self.k_G <= self.n_G:
            raise DimensionError(f"Need 0 <= k_G <= n_G, got k_G={self.k_G}, n_G={self.n_G}")
        if self.n_G > self.tower.m:
            raise DimensionError(f"n_G={self.n_G} exceeds extension degree m={self.tower.m}")
        if len(self.eval_points) != self.n_G:
            raise DimensionError(f"Expected {self.n_G} evaluation points, got {len(self.eval_points)}")
        for a in self.eval_points:
            self.tower.check(a)
        if rank_over_base(self.tower, self.eval_points) != self.n_G:
            raise ConstructionError("Evaluation points are not independent over the base field")


def default_eval_points(t: FieldTower, n_G: int) -> Tuple[ExtElement, ...]:
    """Polynomial basis 1, x, x^2, ... truncated to n_G."""
    if not 0 <= n_G <= t.m:
        raise DimensionError(f"n_G={n_G} must lie in [0, m={t.m}]")
    return tuple(t.monomial(i) for i in range(n_G))


def gabidulin_spec(t: FieldTower, n_G: int, k_G: int, eval_points: Optional[Sequence[int]] = None) -> GabidulinSpec:
    if eval_points is None:
        eval_points = default_eval_points(t, n_G)
    return GabidulinSpec(t, n_G, k_G, tuple(eval_points))


def frobenius_orbit(t: FieldTower, x: ExtElement, count: int) -> List[ExtElement]:
    """[x, x^q, x^(q^2), ...] of the given length."""
    out = []
    for _ in range(count):
        out.append(x)
        x = t.frobenius(x, 1)
    return out


def lin_eval(t: FieldTower, f: LinearizedPoly, x: ExtElement) -> ExtElement:
    acc = 0
    for a, xi in zip(f.coeffs, frobenius_orbit(t, x, len(f.coeffs))):
        if a:
            acc ^= t.mul(a, xi)
    return acc


def gab_encode(spec: GabidulinSpec, message: Sequence[ExtElement]) -> List[ExtElement]:
    if len(message) != spec.k_G:
        raise DimensionError(f"Message length {len(message)} != k_G={spec.k_G}")
    f = LinearizedPoly(tuple(message))
    return [lin_eval(spec.tower, f, a) for a in spec.eval_points]


def rank_weight(t: FieldTower, v: Sequence[ExtElement]) -> int:
    return rank_over_base(t, v)


def select_independent(t: FieldTower, points: Iterable[ExtElement], limit: Optional[int] = None) -> List[int]:
    """Positions of a maximal base-independent subfamily, chosen greedily in order."""
    basis = RowBasis(t.base, t.m)
    chosen: List[int] = []
    for i, a in enumerate(points):
        if limit is not None and len(chosen) == limit:
            break
        if basis.add(t.coords(int(a))):
            chosen.append(i)
    return chosen


def moore_matrix(t: FieldTower, points: Sequence[ExtElement], cols: int):
    """Rows (p, p^q, ..., p^(q^(cols-1))) for every point p."""
    return as_matrix(t, [frobenius_orbit(t, int(p), cols) for p in points], cols=cols)


def moore_interpolate(t: FieldTower, points: Sequence[ExtElement], values: Sequence[ExtElement]) -> LinearizedPoly:
    """Unique f of q-degree below k with f(points[i]) = values[i]."""
    k = len(points)
    if len(values) != k:
        raise DimensionError(f"{k} points but {len(values)} values")
    if rank_over_base(t, points) != k:
        raise DimensionError("Interpolation points are not independent over the base field")
    if k == 0:
        return LinearizedPoly()

    coeffs = solve(t, moore_matrix(t, points, k), list(values))
    if coeffs is None:
        raise InternalError("Moore system inconsistent for independent points")
    return LinearizedPoly(tuple(int(c) for c in coeffs))


def gab_erasure_decode(spec: GabidulinSpec, received: Mapping[int, ExtElement]) -> Optional[List[ExtElement]]:
    """Message from surviving positions, or None if they carry rank below k_G."""
    positions = sorted(received)
    if any(not 0 <= i < spec.n_G for i in positions):
        raise DimensionError("Received position outside the code length")
    picks = select_independent(spec.tower, [spec.eval_points[i] for i in positions], limit=spec.k_G)
    if len(picks) < spec.k_G:
        return None
    pts = [spec.eval_points[positions[i]] for i in picks]
    vals = [received[positions[i]] for i in picks]
    coeffs = moore_interpolate(spec.tower, pts, vals).coeffs
    return list(coeffs) + [0] * (spec.k_G - len(coeffs))


def min_rank_distance(spec: GabidulinSpec, limit: int = RANK_DISTANCE_LIMIT) -> int:
    """Exhaustive minimum rank weight over all nonzero codewords."""
    t = spec.tower
    total = t.order ** spec.k_G
    if total - 1 > limit:
        raise BudgetExceededError(f"{total - 1} codewords exceed the rank-distance budget {limit}")
    if spec.k_G == 0:
        raise DimensionError("Zero-dimensional code has no nonzero codeword")

    # By linearity the codeword of a message is the XOR of per-coefficient images.
    images = [[lin_eval(t, LinearizedPoly((0,) * i + (1,)), a) for a in spec.eval_points] for i in range(spec.k_G)]
    best = spec.n_G
    for message in itertools.product(range(t.order), repeat=spec.k_G):
        if not any(message):
            continue
        word = [0] * spec.n_G
        for coef, row in zip(message, images):
            if coef:
                for j, v in enumerate(row):
                    word[j] ^= t.mul(coef, v)
        best = min(best, rank_weight(t, word))
        if best == 1:
            break
    return best
