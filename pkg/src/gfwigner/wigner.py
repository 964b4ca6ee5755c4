"""Point operators and Wigner tables.

The fast path never forms point operators: it takes the characteristic
function ``chi(beta) = Tr(rho T(beta))`` (one Walsh-Hadamard transform per
X-shift) and applies the symplectic Fourier sum

    W(alpha) = d^-2 sum_beta (-1)^(alpha ^ beta) f_beta chi(beta)

as a two-dimensional Walsh-Hadamard transform.  States given as
Gaussian-integer vectors go through the same path in exact integer
arithmetic.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np

from .errors import CapabilityError
from .field import CoordinateMap, dot, popcount_array
from .fwht import fwht
from .geometry import Line, Point, line_in_striation_through, num_striations, points_of_line
from .net import QuantumNet, f_table, line_projector
from .pauli import (
    DENSE_MAX_QUBITS,
    TranslationBasis,
    dense_matrix,
    translation_in,
)

TOL = 1e-10
NORM_TOL = 1e-12


@dataclass(frozen=True)
class ExactState:
    """Unnormalised Gaussian-integer state vector ``(re + i im) / sqrt(N)``."""

    re: np.ndarray
    im: np.ndarray

    @classmethod
    def from_ints(cls, re, im=None) -> "ExactState":
        re = np.asarray(re, dtype=np.int64)
        im = np.zeros_like(re) if im is None else np.asarray(im, dtype=np.int64)
        return cls(re, im)

    @property
    def norm2(self) -> int:
        return int(np.sum(self.re * self.re + self.im * self.im))

    def vector(self) -> np.ndarray:
        return (self.re + 1j * self.im) / np.sqrt(self.norm2)


@dataclass
class WignerTable:
    """W over the grid, ``values[i, j]`` at (q, p) = (i-th, j-th) field element
    in power order.  ``numer``/``denom`` are set in exact mode."""

    cmap: CoordinateMap
    values: np.ndarray
    numer: np.ndarray | None = None
    denom: int | None = None

    @property
    def n(self) -> int:
        return self.cmap.n

    @property
    def exact(self) -> bool:
        return self.numer is not None

    def at(self, pt: Point) -> float:
        spec = self.cmap.spec
        return float(self.values[spec.power_index(pt[0]), spec.power_index(pt[1])])

    def fraction_at(self, pt: Point) -> Fraction:
        spec = self.cmap.spec
        return Fraction(int(self.numer[spec.power_index(pt[0]), spec.power_index(pt[1])]), self.denom)

    def by_tuple(self) -> np.ndarray:
        """Values re-indexed by Pauli tuples [qt, pt]."""
        qperm, pperm = _orders(self.cmap)
        out = np.empty_like(self.values)
        out[np.ix_(qperm, pperm)] = self.values
        return out

    def total(self):
        if self.exact:
            return Fraction(int(self.numer.sum()), self.denom)
        return float(np.sum(self.values))

    def value_multiset(self) -> dict[Fraction, int]:
        if not self.exact:
            raise ValueError("multiset comparison needs an exact table")
        vals, counts = np.unique(self.numer, return_counts=True)
        return {Fraction(int(v), self.denom): int(c) for v, c in zip(vals, counts)}

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("q_index,p_index,value\n")
        d = self.values.shape[0]
        for i in range(d):
            for j in range(d):
                buf.write(f"{i},{j},{float(self.values[i, j])!r}\n")
        return buf.getvalue()

    def to_json(self) -> str:
        obj = {"n": self.n, "order": "field-power"}
        if self.exact:
            obj["denominator"] = self.denom
            obj["numerators"] = self.numer.tolist()
        else:
            obj["values"] = self.values.tolist()
        return json.dumps(obj)


def _orders(cmap: CoordinateMap) -> tuple[np.ndarray, np.ndarray]:
    els = cmap.spec.elements()
    return (
        np.asarray([cmap.q_of[a] for a in els]),
        np.asarray([cmap.p_of[a] for a in els]),
    )


def _to_field_order(cmap: CoordinateMap, by_tuple: np.ndarray) -> np.ndarray:
    qperm, pperm = _orders(cmap)
    return by_tuple[np.ix_(qperm, pperm)]


# ------------------------------------------------------------- states

def as_density(state) -> np.ndarray:
    if isinstance(state, ExactState):
        v = state.vector()
        return np.outer(v, v.conj())
    a = np.asarray(state, dtype=complex)
    if a.ndim == 1:
        return np.outer(a, a.conj())
    return a


def _check_state(state, d: int) -> None:
    if isinstance(state, ExactState):
        if state.re.shape != (d,) or state.norm2 == 0:
            raise ValueError("exact state has wrong size or is zero")
        return
    a = np.asarray(state)
    if a.ndim == 1:
        if a.shape != (d,):
            raise ValueError(f"state vector must have {d} amplitudes")
        if abs(np.vdot(a, a).real - 1) > NORM_TOL:
            raise ValueError("state vector is not normalised")
    elif a.ndim == 2:
        if a.shape != (d, d):
            raise ValueError(f"density operator must be {d}x{d}")
        if abs(np.trace(a) - 1) > NORM_TOL:
            raise ValueError("density operator does not have unit trace")
        if np.max(np.abs(a - a.conj().T)) > NORM_TOL:
            raise ValueError("density operator is not Hermitian")
    else:
        raise ValueError("state must be a vector or a square matrix")


def _shift_products(state) -> np.ndarray:
    """``h[q, k] = rho[k, k ^ q]`` (complex)."""
    if isinstance(state, ExactState):
        raise TypeError("exact states use _shift_products_exact")
    a = np.asarray(state, dtype=complex)
    d = a.shape[0]
    k = np.arange(d)
    q = k[:, None]
    if a.ndim == 1:
        return a[None, :] * a[k[None, :] ^ q].conj()
    return a[k[None, :], k[None, :] ^ q]


def raw_characteristic(state) -> np.ndarray:
    """``Tr(rho X^q Z^p)`` for all [q, p] (no canonical phase)."""
    return fwht(_shift_products(state), axis=1)


def _raw_characteristic_exact(state: ExactState) -> tuple[np.ndarray, np.ndarray]:
    """Real and imaginary parts of ``N Tr(rho X^q Z^p)`` as integers."""
    d = state.re.shape[0]
    k = np.arange(d)
    shifted = k[None, :] ^ k[:, None]
    ar, ai = state.re[None, :], state.im[None, :]
    br, bi = state.re[shifted], state.im[shifted]
    # a * conj(b)
    hr = ar * br + ai * bi
    hi = ai * br - ar * bi
    return fwht(hr, axis=1), fwht(hi, axis=1)


def _basis_tables(basis: TranslationBasis | None, n: int):
    """Physical (q, p, phase) of T'(qt, pt) for every abstract point."""
    d = 1 << n
    if basis is None or basis.is_canonical():
        k = np.arange(d)
        q = np.broadcast_to(k[:, None], (d, d))
        p = np.broadcast_to(k[None, :], (d, d))
        return q, p, popcount_array(q & p) % 4
    q = np.empty((d, d), dtype=np.int64)
    p = np.empty((d, d), dtype=np.int64)
    ph = np.empty((d, d), dtype=np.int64)
    for a in range(d):
        for b in range(d):
            t = basis.translation(a, b)
            q[a, b], p[a, b], ph[a, b] = t.qbits, t.pbits, t.phase_exp
    return q, p, ph


def characteristic(state, n: int, basis: TranslationBasis | None = None) -> np.ndarray:
    """``Tr(rho T'(beta))`` indexed by abstract tuples [qt, pt]; real."""
    raw = raw_characteristic(state)
    q, p, ph = _basis_tables(basis, n)
    chi = raw[q, p] * np.asarray((1, 1j, -1, -1j))[ph]
    return chi.real


def _symplectic_fourier(g: np.ndarray) -> np.ndarray:
    """``sum_beta (-1)^(q_a.p_b + q_b.p_a) g[q_b, p_b]`` indexed [q_a, p_a]."""
    h = fwht(g, axis=1)  # [q_b, q_a]
    return fwht(h, axis=0).T  # [p_a, q_a] -> [q_a, p_a]


def wigner_of_state(
    net: QuantumNet, state, basis: TranslationBasis | None = None
) -> WignerTable:
    cmap = net.cmap
    d = cmap.d
    _check_state(state, d)
    f = f_table(net).astype(np.int64)
    if isinstance(state, ExactState):
        rr, ri = _raw_characteristic_exact(state)
        q, p, ph = _basis_tables(basis, cmap.n)
        rr, ri = rr[q, p], ri[q, p]
        # multiply by i^ph
        cr = np.select([ph == 0, ph == 1, ph == 2, ph == 3], [rr, -ri, -rr, ri])
        ci = np.select([ph == 0, ph == 1, ph == 2, ph == 3], [ri, rr, -ri, -rr])
        if np.any(ci != 0):
            raise AssertionError("characteristic function is not real")
        num = _symplectic_fourier(f * cr)
        den = d * d * state.norm2
        g = gcd(int(np.gcd.reduce(np.abs(num).ravel())), den) or den
        num = num // g
        den //= g
        num = _to_field_order(cmap, num)
        return WignerTable(cmap, num / den, num, den)
    chi = characteristic(state, cmap.n, basis)
    w = _symplectic_fourier(f * chi) / (d * d)
    return WignerTable(cmap, _to_field_order(cmap, w))


# --------------------------------------------------------- point operators

def _check_dense(n: int) -> None:
    if n > DENSE_MAX_QUBITS:
        raise CapabilityError(f"dense point operators need n<={DENSE_MAX_QUBITS}")


def point_operator(
    net: QuantumNet,
    alpha: Point,
    basis: TranslationBasis | None = None,
    construction: str = "pauli",
    bases: list[list[np.ndarray]] | None = None,
) -> np.ndarray:
    """Dense A(alpha) for a field point ``alpha``.

    ``construction="pauli"`` sums f-weighted translations;
    ``construction="lines"`` sums the projectors of the d+1 lines through
    ``alpha`` and subtracts the identity.  Passing the output of
    :func:`~gfwigner.net.mub_bases` as ``bases`` avoids rebuilding them.
    """
    cmap = net.cmap
    _check_dense(cmap.n)
    d, n = cmap.d, cmap.n
    if construction == "lines":
        spec = cmap.spec
        acc = -np.eye(d, dtype=complex)
        for r in range(num_striations(spec)):
            line = line_in_striation_through(spec, r, alpha)
            if bases is not None:
                acc += bases[r][spec.power_index(line.intercept)]
            else:
                acc += line_projector(net, line, basis)
        return acc / d
    if construction != "pauli":
        raise ValueError(f"unknown construction {construction!r}")
    qa, pa = cmap.q_of[alpha[0]], cmap.p_of[alpha[1]]
    f = f_table(net)
    acc = np.zeros((d, d), dtype=complex)
    for qb in range(d):
        for pb in range(d):
            sign = -1 if (dot(qa, pb) + dot(qb, pa)) & 1 else 1
            acc += sign * int(f[qb, pb]) * dense_matrix(translation_in(basis, n, qb, pb))
    return acc / (d * d)


def all_point_operators(net: QuantumNet, basis: TranslationBasis | None = None) -> np.ndarray:
    """Every A(alpha) at once, shape (d, d, d, d) indexed by field-power (q, p).

    Same Pauli sum as :func:`point_operator`, done as one matrix product of
    the sign-weighted symplectic character with the stacked translations.
    """
    cmap = net.cmap
    _check_dense(cmap.n)
    d, n = cmap.d, cmap.n
    k = np.arange(d)
    ops = np.stack([dense_matrix(translation_in(basis, n, qb, pb)) for qb in range(d) for pb in range(d)])
    f = f_table(net).astype(float).ravel()
    qa = np.asarray(cmap.q_of)[np.asarray(cmap.spec.elements())]
    pa = np.asarray(cmap.p_of)[np.asarray(cmap.spec.elements())]
    # character (-1)^(q_a.p_b + q_b.p_a) for field-ordered alpha, tuple-ordered beta
    c1 = popcount_array(qa[:, None] & k[None, :])  # q_a . p_b
    c2 = popcount_array(k[:, None] & pa[None, :])  # q_b . p_a
    sign = 1 - 2 * ((c1[:, None, None, :] + c2.T[None, :, :, None]) & 1)
    weights = sign.reshape(d * d, d * d) * f[None, :]
    out = weights @ ops.reshape(d * d, d * d) / (d * d)
    return out.reshape(d, d, d, d)


def dense_wigner(net: QuantumNet, state, basis: TranslationBasis | None = None) -> np.ndarray:
    """W via explicit point operators, in field-power order (oracle path)."""
    cmap = net.cmap
    rho = as_density(state)
    els = cmap.spec.elements()
    out = np.empty((cmap.d, cmap.d))
    for i, q in enumerate(els):
        for j, p in enumerate(els):
            out[i, j] = np.trace(rho @ point_operator(net, (q, p), basis)).real
    return out


# ------------------------------------------------------------- axioms

def line_sum(w: WignerTable, line: Line):
    spec = w.cmap.spec
    idx = [(spec.power_index(q), spec.power_index(p)) for q, p in points_of_line(spec, line)]
    if w.exact:
        return Fraction(int(sum(w.numer[i, j] for i, j in idx)), w.denom)
    return float(sum(w.values[i, j] for i, j in idx))


def table_inner_product(w1: WignerTable, w2: WignerTable) -> float:
    if w1.cmap.d != w2.cmap.d:
        raise ValueError("tables have different sizes")
    return float(w1.cmap.d * np.sum(w1.values * w2.values))


def translate_state(state, delta_tuple: tuple[int, int], n: int, basis: TranslationBasis | None = None):
    t = dense_matrix(translation_in(basis, n, *delta_tuple), max_qubits=max(n, DENSE_MAX_QUBITS))
    rho = as_density(state)
    return t @ rho @ t.conj().T


def covariance_check(
    net: QuantumNet, state, delta: Point, basis: TranslationBasis | None = None
) -> float:
    """max |W_{T rho T^+}(alpha + delta) - W_rho(alpha)| over the grid."""
    cmap = net.cmap
    dt = (cmap.q_of[delta[0]], cmap.p_of[delta[1]])
    w = wigner_of_state(net, state, basis).by_tuple()
    moved = wigner_of_state(net, translate_state(state, dt, cmap.n, basis), basis).by_tuple()
    k = np.arange(cmap.d)
    shifted = moved[np.ix_(k ^ dt[0], k ^ dt[1])]
    return float(np.max(np.abs(shifted - w)))


def point_operator_gram(net: QuantumNet, basis: TranslationBasis | None = None) -> np.ndarray:
    """``Tr(A(a) A(b))`` over all field points in power order (row-major)."""
    d = net.d
    flat = all_point_operators(net, basis).reshape(d * d, d * d)
    return (flat.conj() @ flat.T).real


def random_pure_state(d: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)


def random_mixed_state(d: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    rank = d if rank is None else rank
    g = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real
