"""
Local checks, closures and the greedy shortening-set construction.

The shortening bound fixes the coordinates of a set I whose closure is large,
then bounds the residual code with a k*/d* oracle.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel

from .bounds import DOracle, KOracle, rate_cap, singleton_d, singleton_k
from .config import LOCAL_CHECK_BUDGET
from .constructions import LinearCode
from .errors import BoundError, BudgetExceededError, ShorteningError
from .linalg import Field, Matrix, RowBasis, matmul, nullspace, rref, transpose

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class LocalCheckSet:
    """Dual codewords of weight <= r+1, one row each."""

    field: Field
    n: int
    r: int
    checks: Matrix

    def __len__(self) -> int:
        return int(self.checks.shape[0])

    def support(self, i: int) -> Tuple[int, ...]:
        return tuple(int(j) for j in np.nonzero(self.checks[i])[0])

    def supports(self) -> List[Tuple[int, ...]]:
        return [self.support(i) for i in range(len(self))]

    def covering(self, coord: int) -> List[int]:
        """Indices of checks whose support contains coord."""
        return [int(i) for i in np.nonzero(self.checks[:, coord])[0]]


def _normalize(field: Field, v: np.ndarray) -> Tuple[int, ...]:
    lead = int(v[np.nonzero(v)[0][0]])
    if lead != 1:
        v = field.scale(field.inv(lead), v)
    return tuple(int(x) for x in v)


def enumerate_local_checks(code: LinearCode, r: int, budget: int = LOCAL_CHECK_BUDGET) -> LocalCheckSet:
    """Dual codewords supported on at most r+1 coordinates.

    Every (r+1)-subset S contributes a basis of the dual words living inside S;
    smaller supports are covered by their supersets.
    """
    n, field = code.n, code.field
    size = min(r + 1, n)
    cost = math.comb(n, size) * size**3
    if cost > budget:
        raise BudgetExceededError(f"Local-check enumeration cost {cost} exceeds budget {budget}")

    G = code.generator
    found: Dict[Tuple[int, ...], None] = {}
    for S in itertools.combinations(range(n), size):
        cols = list(S)
        basis = nullspace(field, G[:, cols]) if G.shape[0] else np.eye(size, dtype=np.int64)
        for row in basis:
            v = np.zeros(n, dtype=np.int64)
            v[cols] = row
            found.setdefault(_normalize(field, v), None)

    checks = np.array(list(found), dtype=np.int64).reshape(len(found), n)
    logger.debug(f"{len(found)} local checks of weight <= {r + 1}")
    return LocalCheckSet(field, n, r, checks)


def closure(code: LinearCode, I: Sequence[int]) -> Tuple[int, ...]:
    """Coordinates whose value is fixed by the values on I."""
    I = sorted(set(int(i) for i in I))
    if any(not 0 <= i < code.n for i in I):
        raise ShorteningError(f"Coordinate set leaves [0, {code.n})")
    G = code.generator
    if G.shape[0] == 0:
        return tuple(range(code.n))

    field = code.field
    # Messages u with (uG)_I = 0 span the subcode vanishing on I.
    N = nullspace(field, transpose(G[:, I])) if I else np.eye(G.shape[0], dtype=np.int64)
    if N.shape[0] == 0:
        return tuple(range(code.n))
    sub = matmul(field, N, G)
    zero_cols = np.nonzero(~np.any(sub != 0, axis=0))[0]
    return tuple(sorted(set(I) | {int(j) for j in zero_cols}))


class ShorteningResult(BaseModel):
    X: List[int]
    I: List[int]
    J: List[int]
    s: int
    s1: int
    j: int
    l: int
    size_bound: Optional[float] = None


def sub_lrc_size_bound(s1: int, s: int, r: int, t: int) -> Fraction:
    """|I| accounting when the first s1 checks close up into a shorter (r, t) code."""
    return s1 / (1 - rate_cap(r, t)) - s1 + 1 + (s - s1) * (r - 1)


def algorithm1(checks: LocalCheckSet, s: int, n: int, r: int, t: Optional[int] = None) -> ShorteningResult:
    """Greedy choice of s independent local checks with overlapping supports.

    I is J without the rref pivots of the chosen checks, padded to 1 + (r-1)s.
    """
    if s < 1:
        raise ShorteningError(f"s must be >= 1, got {s}")
    if len(checks) == 0:
        raise ShorteningError("No local checks to choose from")

    field = checks.field
    supports = [set(sup) for sup in checks.supports()]
    basis = RowBasis(field, n)
    basis.add(checks.checks[0])
    X = [0]
    J = set(supports[0])
    remaining = list(range(1, len(checks)))
    i, l, j, s1 = 1, 1, 0, 0

    while i < s:
        if not remaining:
            raise ShorteningError(f"Only {i} independent local checks available, {s} requested")
        best = max(remaining, key=lambda c: (len(J & supports[c]), -c))
        remaining.remove(best)
        h = checks.checks[best]
        if not J & supports[best]:
            # Disjoint support: X so far is closed, record where it stopped.
            if j == 0:
                j, s1 = l, i
            basis.add(h)
            i += 1
        elif basis.add(h):
            i += 1
        J |= supports[best]
        X.append(best)
        l += 1

    _, _, pivots = rref(field, checks.checks[X])
    I = sorted(J - set(pivots))
    target = 1 + (r - 1) * s
    if len(I) < target:
        pool = [c for c in range(n) if c not in J] + sorted(pivots)
        I = sorted(I + pool[: target - len(I)])

    size_bound = None
    if j and t is not None:
        size_bound = float(sub_lrc_size_bound(s1, s, r, t))
    return ShorteningResult(X=X, I=I, J=sorted(J), s=s, s1=s1, j=j, l=l, size_bound=size_bound)


def theorem1_k_bound(size_I: int, size_cl: int, n: int, d: int, k_oracle: KOracle = singleton_k, q: int = 2) -> int:
    """k <= |I| + k*(q, n - |Cl(I)|, d)."""
    if size_cl > n - d:
        raise BoundError(f"|Cl(I)|={size_cl} exceeds n - d = {n - d}")
    if size_I > size_cl:
        raise BoundError(f"|I|={size_I} exceeds |Cl(I)|={size_cl}")
    return size_I + k_oracle(q, n - size_cl, d)


def theorem1_d_bound(size_I: int, size_cl: int, n: int, k: int, d_oracle: DOracle = singleton_d, q: int = 2) -> int:
    """d <= d*(q, n - |Cl(I)|, k - |I|)."""
    if size_I >= k:
        raise BoundError(f"|I|={size_I} must be below k={k}")
    if size_I > size_cl:
        raise BoundError(f"|I|={size_I} exceeds |Cl(I)|={size_cl}")
    return d_oracle(q, n - size_cl, k - size_I)


class Theorem2Bounds(BaseModel):
    k_upper: int
    d_upper: int
    s_k: Optional[int] = None
    s_d: Optional[int] = None
    shortening_applicable: bool = True


def _k_term(n: int, d: int, r: int, s: int, k_oracle: KOracle, q: int) -> Optional[int]:
    if s * r + 1 > n - d:
        return None
    return 1 + (r - 1) * s + k_oracle(q, n - 1 - s * r, d)


def _d_term(n: int, k: int, r: int, s: int, d_oracle: DOracle, q: int) -> Optional[int]:
    if 1 + (r - 1) * s >= k or s > n - k:
        return None
    return d_oracle(q, n - 1 - s * r, k - 1 - (r - 1) * s)


def theorem2_bounds(
    n: int,
    k: int,
    d: int,
    r: int,
    k_oracle: KOracle = singleton_k,
    d_oracle: DOracle = singleton_d,
    q: int = 2,
) -> Theorem2Bounds:
    """Minimize both shortening bounds over s >= 1."""
    if r < 2:
        raise BoundError(f"shortening sweep needs r >= 2, got {r}")
    if min(n, k, d) < 1:
        raise BoundError(f"n, k, d must be positive, got n={n}, k={k}, d={d}")

    k_terms = {s: v for s in range(1, n + 1) if (v := _k_term(n, d, r, s, k_oracle, q)) is not None}
    d_terms = {s: v for s in range(1, n + 1) if (v := _d_term(n, k, r, s, d_oracle, q)) is not None}

    if k_terms:
        s_k = min(k_terms, key=lambda s: (k_terms[s], s))
        k_upper = k_terms[s_k]
    else:
        s_k, k_upper = None, k_oracle(q, n, d)
    if d_terms:
        s_d = min(d_terms, key=lambda s: (d_terms[s], s))
        d_upper = d_terms[s_d]
    else:
        s_d, d_upper = None, d_oracle(q, n, k)

    return Theorem2Bounds(
        k_upper=k_upper,
        d_upper=d_upper,
        s_k=s_k,
        s_d=s_d,
        shortening_applicable=bool(k_terms or d_terms),
    )


class BoundTableRow(BaseModel):
    s: int
    size_I_cap: int
    closure_floor: int
    k_term: Optional[int] = None
    d_term: Optional[int] = None


def bound_table(
    n: int,
    k: int,
    d: int,
    r: int,
    s_max: Optional[int] = None,
    k_oracle: KOracle = singleton_k,
    d_oracle: DOracle = singleton_d,
    q: int = 2,
) -> List[BoundTableRow]:
    if s_max is None:
        s_max = n - k
    return [
        BoundTableRow(
            s=s,
            size_I_cap=1 + (r - 1) * s,
            closure_floor=1 + r * s,
            k_term=_k_term(n, d, r, s, k_oracle, q),
            d_term=_d_term(n, k, r, s, d_oracle, q),
        )
        for s in range(1, s_max + 1)
    ]
