"""Phase-tracked symplectic Paulis ``i^s X^q Z^p``.

All product signs come from the single reordering rule
``Z^p X^q = (-1)^(p.q) X^q Z^p``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np

from .errors import CapabilityError
from .field import CoordinateMap, dot, popcount_array, tuple_str
from .geometry import HORIZONTAL, VERTICAL

DENSE_MAX_QUBITS = 6

_I_POWERS = (1, 1j, -1, -1j)


@dataclass(frozen=True)
class PauliElement:
    n: int
    phase_exp: int
    qbits: int
    pbits: int

    def __post_init__(self):
        object.__setattr__(self, "phase_exp", self.phase_exp % 4)

    def __mul__(self, other: "PauliElement") -> "PauliElement":
        return pauli_mul(self, other)

    @property
    def phase(self) -> complex:
        return _I_POWERS[self.phase_exp]

    @property
    def canonical_phase(self) -> int:
        return dot(self.qbits, self.pbits) % 4

    def relative_phase(self) -> int:
        """Exponent ``e`` with ``self = i^e T(q, p)``."""
        return (self.phase_exp - self.canonical_phase) % 4

    def is_identity(self) -> bool:
        return self.qbits == 0 and self.pbits == 0 and self.phase_exp == 0

    def label(self) -> str:
        """Qubit-wise letter string, e.g. ``-XYZ``, with the overall sign."""
        letters = []
        y = 0
        for j in range(self.n):
            bit = 1 << (self.n - 1 - j)
            x, z = bool(self.qbits & bit), bool(self.pbits & bit)
            letters.append("IXZY"[x + 2 * z])
            y += x and z
        e = (self.phase_exp - y) % 4
        return ("", "i", "-", "-i")[e] + "".join(letters)

    def __repr__(self) -> str:
        return f"PauliElement({self.label()})"


def identity(n: int) -> PauliElement:
    return PauliElement(n, 0, 0, 0)


def translation_op(n: int, q: int, p: int) -> PauliElement:
    """Hermitian translation ``T(q, p) = i^(q.p) X^q Z^p``."""
    return PauliElement(n, dot(q, p), q, p)


def pauli_mul(a: PauliElement, b: PauliElement) -> PauliElement:
    if a.n != b.n:
        raise ValueError("Pauli operands act on different qubit counts")
    s = a.phase_exp + b.phase_exp + 2 * dot(a.pbits, b.qbits)
    return PauliElement(a.n, s, a.qbits ^ b.qbits, a.pbits ^ b.pbits)


def pauli_product(ops: Sequence[PauliElement], n: int) -> PauliElement:
    return reduce(pauli_mul, ops, identity(n))


def symplectic_product(a: tuple[int, int], b: tuple[int, int]) -> int:
    """``q_a.p_b + q_b.p_a`` mod 2; Paulis commute iff this is 0."""
    return (dot(a[0], b[1]) + dot(b[0], a[1])) & 1


def commutes(a: PauliElement, b: PauliElement) -> bool:
    return symplectic_product((a.qbits, a.pbits), (b.qbits, b.pbits)) == 0


def single(n: int, kind: str, site: int) -> PauliElement:
    """Hermitian single-qubit Pauli ``kind`` on qubit ``site`` (1-based)."""
    bit = 1 << (n - site)
    kind = kind.upper()
    if kind == "I":
        return identity(n)
    if kind == "X":
        return PauliElement(n, 0, bit, 0)
    if kind == "Z":
        return PauliElement(n, 0, 0, bit)
    if kind == "Y":
        return PauliElement(n, 1, bit, bit)
    raise ValueError(f"unknown Pauli kind {kind!r}")


def dense_matrix(a: PauliElement, max_qubits: int = DENSE_MAX_QUBITS) -> np.ndarray:
    """Dense ``2^n x 2^n`` matrix; qubit 1 is the most significant index bit."""
    if a.n > max_qubits:
        raise CapabilityError(f"dense matrix for n={a.n} exceeds cap n<={max_qubits}")
    d = 1 << a.n
    k = np.arange(d)
    signs = 1 - 2 * (popcount_array(k & a.pbits) & 1)
    out = np.zeros((d, d), dtype=complex)
    out[k ^ a.qbits, k] = a.phase * signs
    return out


def ray_generators(cmap: CoordinateMap, r: int) -> list[PauliElement]:
    """The n designated generators of the ray in striation ``r``.

    Oblique ray k and the horizontal ray use ``T(q0 M^j, p0 M~^(j+k))`` for
    j = 1..n (momentum zero on the horizontal ray); the vertical ray uses
    ``T(0, p0 M~^j)``.
    """
    n = cmap.n
    gens = []
    for j in range(1, n + 1):
        if r == VERTICAL:
            q, p = 0, cmap.p_power(j)
        elif r == HORIZONTAL:
            q, p = cmap.q_power(j), 0
        else:
            q, p = cmap.q_power(j), cmap.p_power(j + r - 2)
        gens.append(translation_op(n, q, p))
    return gens


def ray_subgroup(cmap: CoordinateMap, r: int) -> tuple[list[PauliElement], list[PauliElement]]:
    """All d canonical Paulis on the ray plus its n generators.

    Elements are listed by generator subset, bit j-1 of the index selecting
    generator j.
    """
    n = cmap.n
    gens = ray_generators(cmap, r)
    elements = []
    for c in range(1 << n):
        q = p = 0
        for j in range(n):
            if (c >> j) & 1:
                q ^= gens[j].qbits
                p ^= gens[j].pbits
        elements.append(translation_op(n, q, p))
    return elements, gens


def pauli_str(a: PauliElement) -> str:
    return f"i^{a.phase_exp} X^{tuple_str(a.qbits, a.n)} Z^{tuple_str(a.pbits, a.n)}"


@dataclass(frozen=True)
class TranslationBasis:
    """2n Hermitian Paulis ``X'_j, Z'_j`` with the canonical commutation pattern.

    Translations are ``T'(q, p) = i^(q.p) X'^q Z'^p`` with factors taken in
    increasing qubit order.  The canonical basis gives back ``T(q, p)``.
    """

    x_ops: tuple[PauliElement, ...]
    z_ops: tuple[PauliElement, ...]

    @property
    def n(self) -> int:
        return len(self.x_ops)

    def is_canonical(self) -> bool:
        n = self.n
        return all(
            x == single(n, "X", j + 1) and z == single(n, "Z", j + 1)
            for j, (x, z) in enumerate(zip(self.x_ops, self.z_ops))
        )

    def check_relations(self) -> bool:
        n = self.n
        for a in range(n):
            for b in range(n):
                if not commutes(self.x_ops[a], self.x_ops[b]):
                    return False
                if not commutes(self.z_ops[a], self.z_ops[b]):
                    return False
                if commutes(self.x_ops[a], self.z_ops[b]) != (a != b):
                    return False
        ops = self.x_ops + self.z_ops
        return all(pauli_mul(o, o).is_identity() for o in ops)

    def translation(self, q: int, p: int) -> PauliElement:
        n = self.n
        out = PauliElement(n, dot(q, p), 0, 0)
        for j in range(n):
            if (q >> (n - 1 - j)) & 1:
                out = pauli_mul(out, self.x_ops[j])
        for j in range(n):
            if (p >> (n - 1 - j)) & 1:
                out = pauli_mul(out, self.z_ops[j])
        return out


def canonical_basis(n: int) -> TranslationBasis:
    return TranslationBasis(
        tuple(single(n, "X", j) for j in range(1, n + 1)),
        tuple(single(n, "Z", j) for j in range(1, n + 1)),
    )


def translation_in(basis: TranslationBasis | None, n: int, q: int, p: int) -> PauliElement:
    if basis is None:
        return translation_op(n, q, p)
    return basis.translation(q, p)
