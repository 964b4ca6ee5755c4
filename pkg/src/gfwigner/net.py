"""Quantum nets: generator signs per ray and the derived eigenvalues f_beta.

A net stores, for each of the d+1 rays, a bitmask ``neg[r]`` whose bit j-1
is set when generator j of that ray has eigenvalue -1 on the ray state.  Any
other f_beta follows from multiplying generators, so inconsistent sign
systems cannot be represented.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import CapabilityError
from .field import CoordinateMap, build_coordinate_map, make_field, popcount_array
from .geometry import (
    HORIZONTAL,
    VERTICAL,
    Line,
    anchor_point,
    points_of_line,
    ray,
    striation_of_direction,
)
from .pauli import (
    DENSE_MAX_QUBITS,
    PauliElement,
    TranslationBasis,
    dense_matrix,
    pauli_mul,
    ray_generators,
    translation_in,
)

ENUMERATION_BUDGET = 24


@dataclass(frozen=True)
class QuantumNet:
    cmap: CoordinateMap
    neg: tuple[int, ...]

    def __post_init__(self):
        if len(self.neg) != self.cmap.d + 1:
            raise ValueError(f"net needs {self.cmap.d + 1} ray masks, got {len(self.neg)}")
        full = (1 << self.cmap.n) - 1
        if any(m & ~full for m in self.neg):
            raise ValueError("sign mask has bits beyond n generators")

    @property
    def n(self) -> int:
        return self.cmap.n

    @property
    def d(self) -> int:
        return self.cmap.d

    @property
    def gen_signs(self) -> list[list[int]]:
        n = self.n
        return [[-1 if (m >> j) & 1 else 1 for j in range(n)] for m in self.neg]

    @classmethod
    def from_signs(cls, cmap: CoordinateMap, gen_signs: Sequence[Sequence[int]]) -> "QuantumNet":
        neg = []
        for row in gen_signs:
            if len(row) != cmap.n or any(s not in (1, -1) for s in row):
                raise ValueError(f"bad sign row {row!r}")
            neg.append(sum(1 << j for j, s in enumerate(row) if s == -1))
        return cls(cmap, tuple(neg))

    def with_ray(self, r: int, mask: int) -> "QuantumNet":
        neg = list(self.neg)
        neg[r] = mask
        return QuantumNet(self.cmap, tuple(neg))


def all_plus_net(cmap: CoordinateMap) -> QuantumNet:
    return QuantumNet(cmap, (0,) * (cmap.d + 1))


# ---------------------------------------------------------------- scalar path

def ray_of(cmap: CoordinateMap, qt: int, pt: int) -> int:
    """Striation whose ray holds the Pauli point (qt, pt) (tuple coordinates)."""
    return striation_of_direction(cmap.spec, cmap.q_inv[qt], cmap.p_inv[pt])


def decompose(cmap: CoordinateMap, qt: int, pt: int) -> tuple[int, int]:
    """Return (ray, coefficient mask) expressing (qt, pt) over the ray generators."""
    r = ray_of(cmap, qt, pt)
    gens = ray_generators(cmap, r)
    target = pt if r == VERTICAL else qt
    # Gaussian elimination over GF(2), tracking which generators were used
    rows = [(g.pbits if r == VERTICAL else g.qbits, 1 << j) for j, g in enumerate(gens)]
    pivots: list[tuple[int, int]] = []
    for v, tag in rows:
        for pv, ptag in pivots:
            if v ^ pv < v:
                v, tag = v ^ pv, tag ^ ptag
        if v:
            pivots.append((v, tag))
            pivots.sort(reverse=True)
    c = 0
    for pv, ptag in pivots:
        if target ^ pv < target:
            target ^= pv
            c ^= ptag
    if target:
        raise AssertionError("generators do not span the ray")
    return r, c


def f_of(net: QuantumNet, qt: int, pt: int) -> int:
    """Eigenvalue f_beta of T(beta) on the ray state through beta.

    Multiplies the selected generators in order and compares the product
    with the canonical T(beta); the leftover i-phase is always +-1.
    """
    if qt == 0 and pt == 0:
        return 1
    cmap = net.cmap
    r, c = decompose(cmap, qt, pt)
    gens = ray_generators(cmap, r)
    prod = PauliElement(cmap.n, 0, 0, 0)
    sign = 1
    for j, g in enumerate(gens):
        if (c >> j) & 1:
            prod = pauli_mul(prod, g)
            if (net.neg[r] >> j) & 1:
                sign = -sign
    assert (prod.qbits, prod.pbits) == (qt, pt)
    rel = prod.relative_phase()
    if rel not in (0, 2):
        raise AssertionError("ray generators do not commute")
    return sign if rel == 0 else -sign


# ------------------------------------------------------------ vectorised path

@dataclass(frozen=True)
class NetGeometry:
    """Net-independent tables over all Pauli points, indexed [qt, pt].

    ``f_beta = (-1)^(eps + parity(cmask & neg[ray]))`` for beta != 0.
    """

    ray: np.ndarray
    cmask: np.ndarray
    eps: np.ndarray


def _coeff_table(vectors: Sequence[int], d: int) -> np.ndarray:
    """Map every tuple to its coefficient mask over the basis ``vectors``."""
    out = np.zeros(d, dtype=np.int32)
    span = np.zeros(1, dtype=np.int64)
    coeffs = np.zeros(1, dtype=np.int32)
    for j, v in enumerate(vectors):
        span = np.concatenate([span, span ^ v])
        coeffs = np.concatenate([coeffs, coeffs | (1 << j)])
    out[span] = coeffs
    return out


def _row_tables(cmap: CoordinateMap, rows: np.ndarray, cq: np.ndarray):
    """Ray id and eps bit for the points with q-tuples ``rows`` (all nonzero)."""
    n, d = cmap.n, cmap.d
    spec = cmap.spec
    log = np.asarray(spec.log, dtype=np.int64)
    q_inv = np.asarray(cmap.q_inv, dtype=np.int64)
    p_inv = np.asarray(cmap.p_inv, dtype=np.int64)
    ppow = np.asarray([cmap.p_power(j) for j in range(d - 1)], dtype=np.int64)
    qgen = [cmap.q_power(j) for j in range(1, n + 1)]
    pts = np.arange(d, dtype=np.int64)
    lq = log[q_inv[rows]][:, None]
    lp = log[p_inv[pts]][None, :]
    k = (lp - lq) % (d - 1)
    horizontal = np.broadcast_to(pts[None, :] == 0, k.shape)
    ray = np.where(horizontal, HORIZONTAL, 2 + k).astype(np.int32)
    cm = cq[rows][:, None]
    phase = np.zeros(k.shape, dtype=np.int64)
    pacc = np.zeros(k.shape, dtype=np.int64)
    for j in range(1, n + 1):
        sel = (cm >> (j - 1)) & 1
        pg = np.where(horizontal, 0, ppow[(k + j) % (d - 1)])
        qg = qgen[j - 1]
        phase += sel * (popcount_array(pg & qg) + 2 * popcount_array(pacc & qg))
        pacc ^= sel * pg
    if not np.array_equal(pacc, np.broadcast_to(pts[None, :], pacc.shape)):
        raise AssertionError("generator products miss their target points")
    rel = (phase - popcount_array(rows[:, None] & pts[None, :])) % 4
    if np.any(rel & 1):
        raise AssertionError("ray generators do not commute")
    return ray, (rel >> 1).astype(np.uint8)


@lru_cache(maxsize=8)
def net_geometry(cmap: CoordinateMap) -> NetGeometry:
    n, d = cmap.n, cmap.d
    cq = _coeff_table([cmap.q_power(j) for j in range(1, n + 1)], d)
    cp = _coeff_table([cmap.p_power(j) for j in range(1, n + 1)], d)
    ray = np.zeros((d, d), dtype=np.int32)
    eps = np.zeros((d, d), dtype=np.uint8)
    cmask = np.empty((d, d), dtype=np.int32)
    cmask[0, :] = cp
    cmask[1:, :] = cq[1:, None]
    chunk = max(1, (1 << 20) // d)
    for start in range(1, d, chunk):
        rows = np.arange(start, min(d, start + chunk), dtype=np.int64)
        r, e = _row_tables(cmap, rows, cq)
        ray[rows] = r
        eps[rows] = e
    for arr in (ray, cmask, eps):
        arr.setflags(write=False)
    return NetGeometry(ray, cmask, eps)


def f_table(net: QuantumNet) -> np.ndarray:
    """All f_beta as an int8 array indexed [qt, pt]."""
    geo = net_geometry(net.cmap)
    neg = np.asarray(net.neg, dtype=np.int32)
    par = popcount_array(geo.cmask & neg[geo.ray]) & 1
    f = (1 - 2 * (par ^ geo.eps)).astype(np.int8)
    f[0, 0] = 1
    return f


def f_row(net: QuantumNet, m: int) -> np.ndarray:
    """f_(m, p') for every p' (int8, indexed by p')."""
    geo = net_geometry(net.cmap)
    neg = np.asarray(net.neg, dtype=np.int32)
    par = popcount_array(geo.cmask[m] & neg[geo.ray[m]]) & 1
    f = (1 - 2 * (par ^ geo.eps[m])).astype(np.int8)
    if m == 0:
        f[0] = 1
    return f


# ---------------------------------------------------------------- generation

def random_net(cmap: CoordinateMap, seed: int) -> QuantumNet:
    rng = np.random.default_rng(seed)
    bits = rng.integers(0, 2, size=(cmap.d + 1, cmap.n))
    weights = 1 << np.arange(cmap.n)
    return QuantumNet(cmap, tuple(int(v) for v in bits @ weights))


def enumerate_nets(
    cmap: CoordinateMap,
    restrict_to: Iterable[int] | None = None,
    base: QuantumNet | None = None,
) -> Iterator[QuantumNet]:
    """Every sign assignment on the rays ``restrict_to`` (others from ``base``).

    Enumeration is lexicographic in the packed sign index, the first listed
    ray occupying the lowest bits.
    """
    n = cmap.n
    rays = list(range(cmap.d + 1)) if restrict_to is None else list(restrict_to)
    total = n * len(rays)
    if total > ENUMERATION_BUDGET:
        raise CapabilityError(f"{total} free signs exceed the enumeration budget of {ENUMERATION_BUDGET}")
    base_neg = list(base.neg) if base is not None else [0] * (cmap.d + 1)
    full = (1 << n) - 1
    for idx in range(1 << total):
        neg = list(base_neg)
        for i, r in enumerate(rays):
            neg[r] = (idx >> (n * i)) & full
        yield QuantumNet(cmap, tuple(neg))


def count_nets(cmap: CoordinateMap, restrict_to: Iterable[int] | None = None) -> int:
    rays = cmap.d + 1 if restrict_to is None else len(list(restrict_to))
    return 1 << (cmap.n * rays)


# ------------------------------------------------------------------- dense

def _check_dense(n: int) -> None:
    if n > DENSE_MAX_QUBITS:
        raise CapabilityError(f"dense operators need n<={DENSE_MAX_QUBITS}, got n={n}")


def ray_projector(net: QuantumNet, r: int, basis: TranslationBasis | None = None) -> np.ndarray:
    """``(1/d) sum_{beta on ray} f_beta T(beta)``."""
    cmap = net.cmap
    _check_dense(cmap.n)
    d = cmap.d
    out = np.zeros((d, d), dtype=complex)
    for pt in points_of_line(cmap.spec, ray(r)):
        qt, ptt = cmap.q_of[pt[0]], cmap.p_of[pt[1]]
        out += f_of(net, qt, ptt) * dense_matrix(translation_in(basis, cmap.n, qt, ptt))
    return out / d


def line_projector(
    net: QuantumNet, line: Line, basis: TranslationBasis | None = None
) -> np.ndarray:
    """Rank-one projector of ``line``: the ray projector moved by T(anchor)."""
    cmap = net.cmap
    p_ray = ray_projector(net, line.striation, basis)
    if line.intercept == 0:
        return p_ray
    q, p = anchor_point(cmap.spec, line)
    t = dense_matrix(translation_in(basis, cmap.n, cmap.q_of[q], cmap.p_of[p]))
    return t @ p_ray @ t.conj().T


def mub_bases(net: QuantumNet, basis: TranslationBasis | None = None) -> list[list[np.ndarray]]:
    """d+1 bases (one per striation) of d projectors, in intercept order."""
    spec = net.cmap.spec
    out = []
    for r in range(spec.d + 1):
        p_ray = ray_projector(net, r, basis)
        row = []
        for c in spec.elements():
            if c == 0:
                row.append(p_ray)
                continue
            q, p = anchor_point(spec, Line(r, c))
            t = dense_matrix(translation_in(basis, spec.n, net.cmap.q_of[q], net.cmap.p_of[p]))
            row.append(t @ p_ray @ t.conj().T)
        out.append(row)
    return out


def projector_vector(proj: np.ndarray) -> np.ndarray:
    """Unit vector spanning a rank-one projector, first nonzero entry real positive."""
    col = int(np.argmax(np.abs(np.diag(proj))))
    v = proj[:, col] / np.sqrt(proj[col, col].real)
    first = v[np.flatnonzero(np.abs(v) > 1e-12)[0]]
    return v * (abs(first) / first)


# ------------------------------------------------------------ serialisation

def net_to_json(net: QuantumNet) -> str:
    cmap = net.cmap
    obj = {"n": cmap.n, "poly": cmap.spec.poly, "gen_signs": net.gen_signs}
    default = 1 << (cmap.n - 1)
    if cmap.q0 != default or cmap.p0 != default:
        obj["q0"] = cmap.q0
        obj["p0"] = cmap.p0
    return json.dumps(obj)


def net_from_json(text: str) -> QuantumNet:
    obj = json.loads(text)
    spec = make_field(int(obj["n"]), int(obj["poly"]))
    cmap = build_coordinate_map(spec, obj.get("q0"), obj.get("p0"))
    return QuantumNet.from_signs(cmap, obj["gen_signs"])
