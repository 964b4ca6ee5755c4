"""GF(2^n) arithmetic and the field -> n-tuple coordinate maps.

Field elements are plain ints whose bit ``i`` is the coefficient of ``x^i``
in the polynomial basis.  Binary n-tuples (the Pauli labels) are also ints,
but with tuple position 1 (qubit 1) stored in the most significant bit, so
that the tuple ``(1, 0)`` is ``0b10`` and reads the same way it is written.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import CapabilityError

MAX_QUBITS = 12

# Primitive polynomials as (n+1)-bit masks.  n=1 uses x+1, i.e. GF(2).
PRIMITIVE_POLYS: dict[int, int] = {
    1: 0b11,
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10000011,
    8: 0b100011101,
    9: 0b1000010001,
    10: 0b10000001001,
    11: 0b100000000101,
    12: 0b1000001010011,
}


def popcount(x: int) -> int:
    return bin(x).count("1")


def dot(a: int, b: int) -> int:
    """Integer dot product of two n-tuples (not reduced mod 2)."""
    return bin(a & b).count("1")


def tuple_to_int(bits: Sequence[int]) -> int:
    v = 0
    for b in bits:
        v = (v << 1) | (int(b) & 1)
    return v


def int_to_tuple(v: int, n: int) -> tuple[int, ...]:
    return tuple((v >> (n - 1 - i)) & 1 for i in range(n))


def tuple_str(v: int, n: int) -> str:
    return "".join(str(b) for b in int_to_tuple(v, n))


def parse_tuple(s: str, n: int | None = None) -> int:
    s = s.strip().replace(",", "").replace(" ", "")
    if not s or any(c not in "01" for c in s):
        raise ValueError(f"not a binary tuple: {s!r}")
    if n is not None and len(s) != n:
        raise ValueError(f"tuple {s!r} has length {len(s)}, expected {n}")
    return int(s, 2)


def _clmul_reduce(a: int, b: int, n: int, poly: int) -> int:
    r = 0
    top = 1 << n
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a & top:
            a ^= poly
    return r


@dataclass(frozen=True)
class FieldSpec:
    """The field GF(2^n) with a fixed primitive polynomial.

    The generator is the class of ``x`` (bit pattern ``0b10``), reduced mod
    ``poly``; for n = 1 it collapses to 1.
    """

    n: int
    poly: int
    exp: tuple[int, ...] = field(repr=False, compare=False)
    log: tuple[int, ...] = field(repr=False, compare=False)

    @property
    def d(self) -> int:
        return 1 << self.n

    @property
    def generator(self) -> int:
        return self.exp[1 % (self.d - 1)]

    def add(self, a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[(self.log[a] + self.log[b]) % (self.d - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse in GF(2^n)")
        return self.exp[(-self.log[a]) % (self.d - 1)]

    def power(self, j: int) -> int:
        """Return omega**j."""
        return self.exp[j % (self.d - 1)]

    def mul_slow(self, a: int, b: int) -> int:
        """Shift-and-reduce product, independent of the log tables."""
        return _clmul_reduce(a, b, self.n, self.poly)

    def elements(self) -> list[int]:
        """Field elements in power order: 0, 1, w, w^2, ..."""
        return [0] + [self.exp[j] for j in range(self.d - 1)]

    def power_index(self, a: int) -> int:
        """Position of ``a`` in :meth:`elements` order."""
        return 0 if a == 0 else self.log[a] + 1

    def mul_array(self, a: int, b: np.ndarray) -> np.ndarray:
        """Multiply the scalar ``a`` by every entry of ``b``."""
        b = np.asarray(b)
        if a == 0:
            return np.zeros_like(b)
        exp = np.asarray(self.exp, dtype=np.int64)
        log = np.asarray(self.log, dtype=np.int64)
        out = exp[(log[b] + self.log[a]) % (self.d - 1)]
        return np.where(b == 0, 0, out)


@lru_cache(maxsize=None)
def make_field(n: int, poly: int | None = None) -> FieldSpec:
    if not 1 <= n <= MAX_QUBITS:
        raise CapabilityError(f"n={n} outside supported range 1..{MAX_QUBITS}")
    if poly is None:
        poly = PRIMITIVE_POLYS[n]
    if poly >> n != 1:
        raise ValueError(f"polynomial {poly:#b} does not have degree {n}")
    d = 1 << n
    g = _clmul_reduce(1, 0b10, n, poly) if n > 1 else 1
    exp = []
    log = [0] * d
    v = 1
    for j in range(d - 1):
        if j > 0 and v == 1:
            raise ValueError(f"polynomial {poly:#b} is not primitive")
        exp.append(v)
        log[v] = j
        v = _clmul_reduce(v, g, n, poly)
    if v != 1 or len(set(exp)) != d - 1:
        raise ValueError(f"polynomial {poly:#b} is not primitive")
    return FieldSpec(n=n, poly=poly, exp=tuple(exp), log=tuple(log))


def fe_add(spec: FieldSpec, a: int, b: int) -> int:
    return spec.add(a, b)


def fe_mul(spec: FieldSpec, a: int, b: int) -> int:
    return spec.mul(a, b)


def fe_inv(spec: FieldSpec, a: int) -> int:
    return spec.inv(a)


# --- binary matrices (rows are tuple-ints, row i acts on tuple position i) ---

def field_to_tuple(a: int, n: int) -> int:
    """Coefficient vector (c_0, ..., c_{n-1}) of ``a`` as a tuple-int."""
    v = 0
    for i in range(n):
        if (a >> i) & 1:
            v |= 1 << (n - 1 - i)
    return v


def companion_matrix(spec: FieldSpec) -> tuple[int, ...]:
    """Matrix of multiplication by omega acting on row vectors.

    Row ``i`` is the coefficient tuple of ``omega * x^i``.
    """
    n = spec.n
    g = spec.generator
    return tuple(field_to_tuple(spec.mul_slow(1 << i, g), n) for i in range(n))


def vec_mat(v: int, rows: Sequence[int], n: int) -> int:
    r = 0
    for i in range(n):
        if (v >> (n - 1 - i)) & 1:
            r ^= rows[i]
    return r


def mat_mul(a: Sequence[int], b: Sequence[int], n: int) -> tuple[int, ...]:
    return tuple(vec_mat(row, b, n) for row in a)


def transpose(rows: Sequence[int], n: int) -> tuple[int, ...]:
    out = []
    for j in range(n):
        v = 0
        for i in range(n):
            if (rows[i] >> (n - 1 - j)) & 1:
                v |= 1 << (n - 1 - i)
        out.append(v)
    return tuple(out)


def identity_matrix(n: int) -> tuple[int, ...]:
    return tuple(1 << (n - 1 - i) for i in range(n))


def mat_pow(rows: Sequence[int], k: int, n: int) -> tuple[int, ...]:
    result = identity_matrix(n)
    base = tuple(rows)
    while k:
        if k & 1:
            result = mat_mul(result, base, n)
        base = mat_mul(base, base, n)
        k >>= 1
    return result


def gf2_rank(vectors: Sequence[int]) -> int:
    basis: list[int] = []
    for v in vectors:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
    return len(basis)


@dataclass(frozen=True)
class CoordinateMap:
    """Bijections between field coordinates and Pauli n-tuples.

    Position uses ``q0 * M^j`` and momentum ``p0 * M^T^j`` for ``omega^j``;
    zero maps to the zero tuple on both sides.
    """

    spec: FieldSpec
    q0: int
    p0: int
    q_of: tuple[int, ...] = field(repr=False, compare=False)
    p_of: tuple[int, ...] = field(repr=False, compare=False)
    q_inv: tuple[int, ...] = field(repr=False, compare=False)
    p_inv: tuple[int, ...] = field(repr=False, compare=False)

    @property
    def n(self) -> int:
        return self.spec.n

    @property
    def d(self) -> int:
        return self.spec.d

    def q_power(self, j: int) -> int:
        """Position tuple of omega**j."""
        return self.q_of[self.spec.power(j)]

    def p_power(self, j: int) -> int:
        return self.p_of[self.spec.power(j)]


@lru_cache(maxsize=None)
def build_coordinate_map(spec: FieldSpec, q0: int | None = None, p0: int | None = None) -> CoordinateMap:
    n, d = spec.n, spec.d
    if q0 is None:
        q0 = 1 << (n - 1)
    if p0 is None:
        p0 = 1 << (n - 1)
    if q0 == 0 or p0 == 0:
        raise ValueError("base tuples q0 and p0 must be nonzero")
    if q0 >> n or p0 >> n:
        raise ValueError("base tuple has more than n bits")
    m = companion_matrix(spec)
    mt = transpose(m, n)
    q_of = [0] * d
    p_of = [0] * d
    vq, vp = q0, p0
    for j in range(d - 1):
        a = spec.exp[j]
        q_of[a] = vq
        p_of[a] = vp
        vq = vec_mat(vq, m, n)
        vp = vec_mat(vp, mt, n)
    q_inv = [0] * d
    p_inv = [0] * d
    for a in range(d):
        q_inv[q_of[a]] = a
        p_inv[p_of[a]] = a
    if len(set(q_of)) != d or len(set(p_of)) != d:
        raise AssertionError("coordinate tables are not bijective")
    return CoordinateMap(spec, q0, p0, tuple(q_of), tuple(p_of), tuple(q_inv), tuple(p_inv))


def default_cmap(n: int) -> CoordinateMap:
    return build_coordinate_map(make_field(n))


def popcount_array(x) -> np.ndarray:
    return np.bitwise_count(np.asarray(x)).astype(np.int64)
