"""
LRCAvail Field Arithmetic
Exact arithmetic in GF(2^w) and in a degree-m extension GF(2^w)^m.

Base elements are ints in [0, q). Extension elements are packed ints: the
polynomial-basis coordinate i occupies bits [i*w, (i+1)*w), so addition is XOR
in both fields and the subfield embeds as the degree-0 coordinate.
"""

from __future__ import annotations

import functools
import logging
import time
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np

from .config import IRREDUCIBLE_MAX_TRIES, MAX_BASE_WIDTH, PRIMITIVE_POLYNOMIALS
from .errors import FieldError, InternalError

logger = logging.getLogger(__name__)

ExtElement = int
Poly = List[int]


@dataclass(frozen=True, eq=False)
class BaseField:
    w: int
    modulus: int
    exp: np.ndarray
    log: np.ndarray
    _exp: Tuple[int, ...] = field(repr=False)
    _log: Tuple[int, ...] = field(repr=False)

    @property
    def q(self) -> int:
        return 1 << self.w

    zero = 0
    one = 1

    def add(self, a: int, b: int) -> int:
        return a ^ b

    sub = add

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise FieldError("Zero has no inverse")
        return self._exp[(-self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e == 0:
            return 1
        if a == 0:
            return 0
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def mul_arrays(self, a, b) -> np.ndarray:
        """Elementwise product of two broadcastable integer arrays."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = self.exp[(self.log[a] + self.log[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    def scale(self, c: int, vec) -> np.ndarray:
        return self.mul_arrays(c, vec)

    def new_vector(self, values) -> np.ndarray:
        return np.asarray(values, dtype=np.int64)

    def zeros(self, shape) -> np.ndarray:
        return np.zeros(shape, dtype=np.int64)

    def descriptor(self) -> dict:
        return {"w": self.w, "modulus": self.modulus}

    def __repr__(self) -> str:
        return f"BaseField(w={self.w}, q={self.q}, modulus=0b{self.modulus:b})"


@functools.lru_cache(maxsize=None)
def build_base_field(w: int) -> BaseField:
    """Build GF(2^w) exp/log tables from the fixed primitive polynomial for w."""
    if not isinstance(w, int) or not 1 <= w <= MAX_BASE_WIDTH:
        raise FieldError(f"Base field width must be in [1, {MAX_BASE_WIDTH}], got {w}")

    modulus = PRIMITIVE_POLYNOMIALS[w]
    q = 1 << w
    exp = [0] * q
    log = [0] * q
    x = 1
    for i in range(q - 1):
        exp[i] = x
        log[x] = i
        x <<= 1
        if x & q:
            x ^= modulus
    exp[q - 1] = exp[0]

    if len(set(exp[: q - 1])) != q - 1:
        raise InternalError(f"Polynomial 0b{modulus:b} is not primitive for w={w}")

    return BaseField(
        w=w,
        modulus=modulus,
        exp=np.array(exp, dtype=np.int64),
        log=np.array(log, dtype=np.int64),
        _exp=tuple(exp),
        _log=tuple(log),
    )


def carryless_mulmod(a: int, b: int, modulus: int, w: int) -> int:
    """Table-free product in GF(2)[x]/(modulus)."""
    result = 0
    while b:
        if b & 1:
            result ^= a
        b >>= 1
        a <<= 1
        if a >> w & 1:
            a ^= modulus
    return result


# --- Polynomials over the base field (coefficient lists, lowest degree first) ---

def poly_trim(p: Sequence[int]) -> Poly:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def poly_add(a: Sequence[int], b: Sequence[int]) -> Poly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] ^= c
    return poly_trim(out)


def poly_mul(base: BaseField, a: Sequence[int], b: Sequence[int]) -> Poly:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] ^= base.mul(x, y)
    return poly_trim(out)


def poly_mod(base: BaseField, a: Sequence[int], f: Sequence[int]) -> Poly:
    f = poly_trim(f)
    if not f:
        raise FieldError("Polynomial division by zero")
    out = poly_trim(a)
    deg_f = len(f) - 1
    lead_inv = base.inv(f[-1])
    while len(out) - 1 >= deg_f:
        coef = base.mul(out[-1], lead_inv)
        shift = len(out) - 1 - deg_f
        for i, c in enumerate(f):
            if c:
                out[shift + i] ^= base.mul(coef, c)
        out = poly_trim(out)
    return out


def poly_mulmod(base: BaseField, a: Sequence[int], b: Sequence[int], f: Sequence[int]) -> Poly:
    return poly_mod(base, poly_mul(base, a, b), f)


def poly_powmod(base: BaseField, a: Sequence[int], e: int, f: Sequence[int]) -> Poly:
    result: Poly = [1]
    a = poly_mod(base, a, f)
    while e:
        if e & 1:
            result = poly_mulmod(base, result, a, f)
        e >>= 1
        if e:
            a = poly_mulmod(base, a, a, f)
    return poly_mod(base, result, f)


def poly_gcd(base: BaseField, a: Sequence[int], b: Sequence[int]) -> Poly:
    """Monic gcd."""
    a, b = poly_trim(a), poly_trim(b)
    while b:
        a, b = b, poly_mod(base, a, b)
    if not a:
        return []
    lead_inv = base.inv(a[-1])
    return [base.mul(c, lead_inv) for c in a]


def _prime_factors(m: int) -> List[int]:
    factors, p = [], 2
    while p * p <= m:
        if m % p == 0:
            factors.append(p)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        factors.append(m)
    return factors


def _x_qpow(base: BaseField, i: int, f: Sequence[int]) -> Poly:
    """x^(q^i) mod f."""
    h: Poly = poly_mod(base, [0, 1], f)
    for _ in range(i):
        h = poly_powmod(base, h, base.q, f)
    return h


def rabin_test(base: BaseField, f: Sequence[int]) -> bool:
    """Rabin's irreducibility test for a monic polynomial over the base field."""
    f = poly_trim(f)
    m = len(f) - 1
    if m < 1 or f[-1] != 1:
        return False
    if m == 1:
        return True
    x = [0, 1]
    if poly_add(_x_qpow(base, m, f), x):
        return False
    for p in _prime_factors(m):
        h = poly_add(_x_qpow(base, m // p, f), x)
        if len(poly_gcd(base, f, h)) != 1:
            return False
    return True


def find_irreducible(base: BaseField, m: int, seed: int = 0) -> Tuple[int, ...]:
    """Seeded search for a monic degree-m irreducible polynomial over the base field."""
    if m < 1:
        raise FieldError(f"Extension degree must be >= 1, got {m}")

    rng = np.random.default_rng(seed)
    start = time.time()
    for attempt in range(1, IRREDUCIBLE_MAX_TRIES + 1):
        coeffs = [int(c) for c in rng.integers(0, base.q, size=m)] + [1]
        if m > 1 and coeffs[0] == 0:
            continue
        if rabin_test(base, coeffs):
            elapsed = time.time() - start
            logger.info(f"[Field] [{elapsed:6.1f}s] Degree-{m} irreducible over GF({base.q}) after {attempt} draws")
            return tuple(coeffs)
    raise InternalError(f"No irreducible polynomial of degree {m} in {IRREDUCIBLE_MAX_TRIES} draws")


# --- Extension field ---

@dataclass(frozen=True, eq=False)
class FieldTower:
    base: BaseField
    m: int
    ext_modulus: Tuple[int, ...]
    _bits: int = field(init=False, repr=False)
    _mask: int = field(init=False, repr=False)
    _mod_bits: int = field(init=False, repr=False)

    def __post_init__(self):
        if self.m < 1:
            raise FieldError(f"Extension degree must be >= 1, got {self.m}")
        mod = tuple(int(c) for c in self.ext_modulus)
        if len(mod) != self.m + 1 or mod[-1] != 1:
            raise FieldError(f"Extension modulus must be monic of degree {self.m}: {mod}")
        if any(not 0 <= c < self.base.q for c in mod):
            raise FieldError("Extension modulus has coefficients outside the base field")
        if not rabin_test(self.base, mod):
            raise FieldError(f"Extension modulus {mod} is reducible over GF({self.base.q})")
        object.__setattr__(self, "ext_modulus", mod)
        object.__setattr__(self, "_bits", self.m * self.base.w)
        object.__setattr__(self, "_mask", (1 << self.base.w) - 1)
        # Packed modulus is only meaningful for the GF(2) fast path.
        object.__setattr__(self, "_mod_bits", sum(c << i for i, c in enumerate(mod)) if self.base.w == 1 else 0)

    zero = 0
    one = 1

    @property
    def q(self) -> int:
        return self.base.q

    @property
    def order(self) -> int:
        return self.base.q ** self.m

    def coords(self, a: ExtElement) -> Tuple[int, ...]:
        w, mask = self.base.w, self._mask
        return tuple((a >> (i * w)) & mask for i in range(self.m))

    def from_coords(self, coords: Sequence[int]) -> ExtElement:
        if len(coords) != self.m:
            raise FieldError(f"Expected {self.m} coordinates, got {len(coords)}")
        w = self.base.w
        out = 0
        for i, c in enumerate(coords):
            c = int(c)
            if not 0 <= c < self.base.q:
                raise FieldError(f"Coordinate {c} outside GF({self.base.q})")
            out |= c << (i * w)
        return out

    def check(self, a: ExtElement) -> ExtElement:
        if not 0 <= a < (1 << self._bits):
            raise FieldError(f"{a} is not an element of this tower")
        return a

    def monomial(self, i: int) -> ExtElement:
        """x^i in the polynomial basis, i < m."""
        return 1 << (i * self.base.w)

    def add(self, a: ExtElement, b: ExtElement) -> ExtElement:
        return a ^ b

    sub = add

    def mul(self, a: ExtElement, b: ExtElement) -> ExtElement:
        if a == 0 or b == 0:
            return 0
        if self.base.w == 1:
            return self._mul_binary(a, b)
        return self._mul_generic(a, b)

    def _mul_binary(self, a: int, b: int) -> int:
        result = 0
        while b:
            if b & 1:
                result ^= a
            b >>= 1
            a <<= 1
        m, mod = self.m, self._mod_bits
        length = result.bit_length()
        while length > m:
            result ^= mod << (length - 1 - m)
            length = result.bit_length()
        return result

    def _mul_generic(self, a: int, b: int) -> int:
        base, m = self.base, self.m
        exp, log, order = base._exp, base._log, base.q - 1
        ca, cb = self.coords(a), self.coords(b)
        lb = [(j, log[y]) for j, y in enumerate(cb) if y]
        prod = [0] * (2 * m - 1)
        for i, x in enumerate(ca):
            if x == 0:
                continue
            lx = log[x]
            for j, ly in lb:
                prod[i + j] ^= exp[(lx + ly) % order]
        mod = self.ext_modulus
        for d in range(2 * m - 2, m - 1, -1):
            c = prod[d]
            if c:
                lc = log[c]
                for k in range(m):
                    if mod[k]:
                        prod[d - m + k] ^= exp[(lc + log[mod[k]]) % order]
                prod[d] = 0
        w = base.w
        out = 0
        for i in range(m):
            out |= prod[i] << (i * w)
        return out

    def scale_element(self, c: int, a: ExtElement) -> ExtElement:
        """Multiply an extension element by a base-field scalar."""
        if c == 0 or a == 0:
            return 0
        if c == 1:
            return a
        return self.from_coords([self.base.mul(c, x) for x in self.coords(a)])

    def pow(self, a: ExtElement, e: int) -> ExtElement:
        if e < 0:
            return self.pow(self.inv(a), -e)
        result = 1
        while e:
            if e & 1:
                result = self.mul(result, a)
            e >>= 1
            if e:
                a = self.mul(a, a)
        return result

    def inv(self, a: ExtElement) -> ExtElement:
        if a == 0:
            raise FieldError("Zero has no inverse")
        return self.pow(a, self.order - 2)

    def frobenius(self, a: ExtElement, i: int) -> ExtElement:
        if i < 0:
            raise FieldError(f"Frobenius power must be >= 0, got {i}")
        for _ in range((i % self.m) * self.base.w):
            a = self.mul(a, a)
        return a

    def random_element(self, rng: np.random.Generator) -> ExtElement:
        return self.from_coords([int(c) for c in rng.integers(0, self.base.q, size=self.m)])

    def new_vector(self, values) -> np.ndarray:
        out = np.empty(len(values), dtype=object)
        out[:] = [int(v) for v in values]
        return out

    def zeros(self, shape) -> np.ndarray:
        out = np.empty(shape, dtype=object)
        out.fill(0)
        return out

    def scale(self, c: ExtElement, vec) -> np.ndarray:
        """Multiply every entry of an object vector by c."""
        return self.new_vector([self.mul(c, v) for v in vec])

    def descriptor(self) -> dict:
        return {
            "w": self.base.w,
            "m": self.m,
            "modulus": self.base.modulus,
            "ext_modulus": list(self.ext_modulus),
        }

    def __repr__(self) -> str:
        return f"FieldTower(q={self.q}, m={self.m}, ext_modulus={self.ext_modulus})"


def build_tower(w: int, m: int, seed: int = 0) -> FieldTower:
    base = build_base_field(w)
    return FieldTower(base, m, find_irreducible(base, m, seed))


def ext_add(t: FieldTower, a: ExtElement, b: ExtElement) -> ExtElement:
    return t.add(a, b)


def ext_mul(t: FieldTower, a: ExtElement, b: ExtElement) -> ExtElement:
    return t.mul(a, b)


def ext_inv(t: FieldTower, a: ExtElement) -> ExtElement:
    return t.inv(a)


def frobenius(t: FieldTower, a: ExtElement, i: int) -> ExtElement:
    """a^(q^i)."""
    return t.frobenius(a, i)


def ext_scale(t: FieldTower, c: int, a: ExtElement) -> ExtElement:
    """Base-field scalar times extension element."""
    return t.scale_element(c, a)
