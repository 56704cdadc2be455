"""
Distance and rate bounds for (r, t) availability codes.

Finite bounds use exact integer arithmetic. The asymptotic curves use floats and
the transcendental expansion equation solved by bisection.
"""

from __future__ import annotations

import csv
import io
import logging
import math
import time
from fractions import Fraction
from pathlib import Path
from typing import Callable, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, model_validator
from scipy.optimize import bisect
from scipy.special import entr

from .config import (
    BRACKET_HALVINGS,
    CSV_DIGITS,
    CSV_HEADER,
    GAMMA_XTOL,
    ROOT_MAX_ITER,
    ROOT_RESIDUAL,
    ROOT_XTOL,
)
from .errors import BoundError

logger = logging.getLogger(__name__)

KOracle = Callable[[int, int, int], int]
DOracle = Callable[[int, int, int], int]


class BoundQuery(BaseModel):
    n: int
    k: int
    r: int
    t: int
    d: Optional[int] = None
    q: int = 2

    @model_validator(mode="after")
    def check_ranges(self):
        if not 1 <= self.k <= self.n:
            raise ValueError(f"need 1 <= k <= n, got k={self.k}, n={self.n}")
        if self.r < 1:
            raise ValueError(f"need r >= 1, got {self.r}")
        if self.t < 0:
            raise ValueError(f"need t >= 0, got {self.t}")
        if self.q < 2:
            raise ValueError(f"need q >= 2, got {self.q}")
        return self


# --- Oracles for the best code of given length ---

def singleton_k(q: int, n: int, d: int) -> int:
    return n - d + 1


def singleton_d(q: int, n: int, k: int) -> int:
    return n - k + 1


def _griesmer_length(q: int, k: int, d: int) -> int:
    return sum(-(-d // q**i) for i in range(k))


def griesmer_k(q: int, n: int, d: int) -> int:
    """Largest k with a Griesmer length <= n."""
    k = 0
    while _griesmer_length(q, k + 1, d) <= n:
        k += 1
    return k


def griesmer_d(q: int, n: int, k: int) -> int:
    """Largest d with a Griesmer length <= n."""
    if k < 1 or k > n:
        return n - k + 1
    d = 0
    while _griesmer_length(q, k, d + 1) <= n:
        d += 1
    return d


# --- Finite bounds ---

def rate_cap(r: int, t: int) -> Fraction:
    """prod_{i=1..t} 1 / (1 + 1/(i r))."""
    if r < 1 or t < 0:
        raise BoundError(f"rate cap needs r >= 1 and t >= 0, got r={r}, t={t}")
    out = Fraction(1)
    for i in range(1, t + 1):
        out *= Fraction(i * r, i * r + 1)
    return out


def wang_rawat_bound(q: BoundQuery) -> int:
    if q.t < 1:
        raise BoundError("Wang/Rawat bound needs t >= 1")
    num = q.t * (q.k - 1) + 1
    den = q.t * (q.r - 1) + 1
    return q.n - q.k + 2 - (-(-num // den))


def tbf_bound(q: BoundQuery) -> int:
    return q.n - sum((q.k - 1) // q.r**i for i in range(q.t + 1))


def yaakobi_bound(q: BoundQuery, d_oracle: DOracle = singleton_d) -> int:
    """Minimum of d*(n - B, k - A) over x groups holding Y = sum y_j recovering sets.

    A and B depend on the y_j only through Y, so the grid is (x, Y) with x <= Y <= x t.
    """
    if q.t < 1:
        raise BoundError("Yaakobi bound needs t >= 1")
    n, k, r, t = q.n, q.k, q.r, q.t
    x_max = -(-(k - 1) // ((r - 1) * t + 1))
    best: Optional[int] = None
    for x in range(1, x_max + 1):
        for Y in range(x, x * t + 1):
            A = (r - 1) * Y + x
            B = r * Y + x
            if A >= k or n - B < k - A:
                continue
            value = d_oracle(q.q, n - B, k - A)
            best = value if best is None else min(best, value)
    if best is None:
        return d_oracle(q.q, n, k)
    return best


def corollary1_bound(n: int, k: int, r: int) -> int:
    """d <= n - (k - 1) - floor((k - 2) / (r - 1))."""
    if r < 2:
        raise BoundError(f"shortening bound needs r >= 2, got {r}")
    if k < 2:
        raise BoundError(f"shortening bound needs k >= 2, got {k}")
    return n - (k - 1) - (k - 2) // (r - 1)


# --- Asymptotics ---

def binary_entropy(x: float) -> float:
    """h(x) in bits; h(0) = h(1) = 0."""
    x = min(max(float(x), 0.0), 1.0)
    return float((entr(x) + entr(1.0 - x)) / math.log(2))


def lemma1_residual(delta: float, gamma: float, t: int, r: int) -> float:
    g = gamma * (r + 1)
    inner = min(max(delta * g, 0.0), 1.0)
    return (
        (t - 1) / t * binary_entropy(delta)
        - binary_entropy(inner) / (r + 1)
        - delta * g * binary_entropy(1.0 / g)
    )


def _check_gamma(gamma: float, t: int, r: int) -> None:
    if t < 2:
        raise BoundError(f"expansion root needs t >= 2, got {t}")
    if r < 1:
        raise BoundError(f"expansion root needs r >= 1, got {r}")
    lo, hi = 1.0 / (r + 1), 1.0 - 1.0 / t
    if not lo - 1e-15 <= gamma < hi:
        raise BoundError(f"gamma={gamma} outside [{lo}, {hi})")


def lemma1_delta(gamma: float, t: int, r: int, xtol: float = ROOT_XTOL) -> float:
    """Positive root delta* of the expansion equation."""
    _check_gamma(gamma, t, r)
    hi = min(1.0, 1.0 / (gamma * (r + 1)))
    f_hi = lemma1_residual(hi, gamma, t, r)
    if f_hi == 0.0:
        return hi
    if f_hi > 0:
        raise BoundError(f"no sign change: F({hi}) = {f_hi} > 0")

    lo = hi
    for _ in range(BRACKET_HALVINGS):
        lo /= 2
        if lemma1_residual(lo, gamma, t, r) > 0:
            break
    else:
        raise BoundError(f"no sign change below delta={hi} for gamma={gamma}")

    root = bisect(lemma1_residual, lo, hi, args=(gamma, t, r), xtol=xtol, maxiter=ROOT_MAX_ITER)
    residual = abs(lemma1_residual(root, gamma, t, r))
    if residual >= ROOT_RESIDUAL:
        logger.warning(f"Expansion root residual {residual:.3e} at gamma={gamma}")
    return float(root)


def gamma_of_delta(delta: float, t: int, r: int, xtol: float = GAMMA_XTOL) -> float:
    """Largest gamma in [1/(r+1), 1 - 1/t) whose root still reaches delta."""
    if not 0 < delta <= 1:
        raise BoundError(f"delta must lie in (0, 1], got {delta}")
    if t < 2:
        raise BoundError(f"needs t >= 2, got {t}")
    lo, hi = 1.0 / (r + 1), 1.0 - 1.0 / t
    if lemma1_delta(lo, t, r) < delta:
        return lo
    while hi - lo > xtol:
        mid = (lo + hi) / 2
        if lemma1_delta(mid, t, r) >= delta:
            lo = mid
        else:
            hi = mid
    return lo


def theorem3_rate(delta: float, gamma: float, r: int, t: int) -> float:
    """Rate guaranteed by the expander construction."""
    return 1.0 - t / (r + 1) - max(delta * (1.0 - t * gamma), 0.0)


def concat_rate(delta: float, r: int, t: int) -> float:
    return r / (r + t) * (1.0 - delta)


def upper_new_rate(delta: float, r: int) -> float:
    return (r - 1) / r * (1.0 - delta)


def upper_tbf_rate(delta: float, r: int, t: int) -> float:
    """Asymptotic form of the floor-sum bound, (1 - delta) / sum_{i<=t} r^-i."""
    return (1.0 - delta) / sum(r ** -i for i in range(t + 1))


class CurveRow(BaseModel):
    delta: float
    upper_new: float
    upper_tbf: float
    lower_expander: float
    lower_concat: float
    rate_cap: float

    def values(self) -> List[float]:
        return [getattr(self, name) for name in CSV_HEADER]


def _clamp(x: float) -> float:
    return min(max(x, 0.0), 1.0)


def curves(r: int, t: int, grid: int) -> List[CurveRow]:
    if grid < 2:
        raise BoundError(f"grid must be >= 2, got {grid}")
    if r < 2 or t < 2:
        raise BoundError(f"curves need r >= 2 and t >= 2, got r={r}, t={t}")

    cap = float(rate_cap(r, t))
    rows = []
    start_time = time.time()
    for idx, delta in enumerate(np.linspace(0.0, 1.0, grid)):
        delta = float(delta)
        if delta == 0.0:
            lower_expander = theorem3_rate(0.0, 1.0 / (r + 1), r, t)
        else:
            lower_expander = theorem3_rate(delta, gamma_of_delta(delta, t, r), r, t)
        rows.append(CurveRow(
            delta=delta,
            upper_new=_clamp(upper_new_rate(delta, r)),
            upper_tbf=_clamp(upper_tbf_rate(delta, r, t)),
            lower_expander=_clamp(lower_expander),
            lower_concat=_clamp(concat_rate(delta, r, t)),
            rate_cap=_clamp(cap),
        ))
        if (idx + 1) % 50 == 0:
            elapsed = time.time() - start_time
            logger.info(f"[Curves] [{elapsed:6.1f}s] Row {idx + 1}/{grid}")
    return rows


def find_crossover(rows: Sequence[CurveRow], tol: float = 1e-12) -> Optional[float]:
    """First delta where the expander curve overtakes the concatenated one.

    Only counts if the concatenated curve was strictly ahead earlier.
    """
    concat_ahead = False
    for row in rows:
        diff = row.lower_concat - row.lower_expander
        if diff > tol:
            concat_ahead = True
        elif concat_ahead and diff < -tol:
            return row.delta
    return None


def format_curves_csv(rows: Sequence[CurveRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow([f"{v:.{CSV_DIGITS}g}" for v in row.values()])
    return buf.getvalue()


def write_curves_csv(rows: Sequence[CurveRow], path) -> Path:
    path = Path(path)
    path.write_text(format_curves_csv(rows))
    return path
