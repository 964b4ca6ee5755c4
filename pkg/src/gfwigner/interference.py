"""Interference between two computational states.

For |psi> = a|0> + b|m>, the cross term of the Wigner function separates as
``2 Re{a b* (-1)^(m.p) F(q)}`` with

    F(q) = d^-2 sum_p' f_(m,p') (-1)^(q.p') i^(m.p')

which is a Walsh-Hadamard transform of a Gaussian-integer sequence.
Profiles are kept as exact integer numerators (scaled by d^2).
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import CapabilityError
from .field import CoordinateMap, MAX_QUBITS, default_cmap, dot, popcount_array, tuple_str
from .fwht import fwht
from .geometry import HORIZONTAL
from .net import QuantumNet, all_plus_net, f_of, f_row, f_table, net_geometry, random_net
from .wigner import _to_field_order

# i^e -> (real, imag)
_IPOW_RE = np.array([1, 0, -1, 0], dtype=np.int64)
_IPOW_IM = np.array([0, 1, 0, -1], dtype=np.int64)


@dataclass
class InterferenceProfile:
    n: int
    m: int
    re_num: np.ndarray  # d^2 Re F(q), indexed by q tuple
    im_num: np.ndarray

    @property
    def d(self) -> int:
        return 1 << self.n

    @property
    def F(self) -> np.ndarray:
        return (self.re_num + 1j * self.im_num) / self.d**2

    @property
    def R(self) -> np.ndarray:
        return np.abs(self.re_num) / self.d**2

    @property
    def I(self) -> np.ndarray:  # noqa: E743
        return np.abs(self.im_num) / self.d**2

    @property
    def maxR(self) -> float:
        return float(np.max(np.abs(self.re_num))) / self.d**2

    @property
    def maxI(self) -> float:
        return float(np.max(np.abs(self.im_num))) / self.d**2

    @property
    def entropyR(self) -> float | None:
        return normalized_entropy(np.abs(self.re_num))

    @property
    def entropyI(self) -> float | None:
        return normalized_entropy(np.abs(self.im_num))

    def support(self) -> list[int]:
        return [int(q) for q in np.flatnonzero((self.re_num != 0) | (self.im_num != 0))]


def _check_m(n: int, m: int) -> None:
    if m == 0:
        raise ValueError("displacement m must be nonzero")
    if not 0 < m < (1 << n):
        raise ValueError(f"displacement {m} is not an {n}-tuple")


def _weighted_row(f: np.ndarray, m: int, d: int) -> tuple[np.ndarray, np.ndarray]:
    """Real and imaginary parts of ``f(p') i^(m.p')``."""
    e = popcount_array(np.arange(d) & m) % 4
    f = f.astype(np.int64)
    return f * _IPOW_RE[e], f * _IPOW_IM[e]


def interference_profile(net: QuantumNet, m: int) -> InterferenceProfile:
    n, d = net.n, net.d
    _check_m(n, m)
    gr, gi = _weighted_row(f_row(net, m), m, d)
    return InterferenceProfile(n, m, fwht(gr), fwht(gi))


def profile_direct(net: QuantumNet, m: int, f_values: np.ndarray | None = None) -> tuple[np.ndarray, np.ndarray]:
    """``d^2 F(q)`` by explicit summation over p' (oracle).

    With ``f_values`` omitted the eigenvalues come from the scalar Pauli
    product path, one point at a time.
    """
    n, d = net.n, net.d
    _check_m(n, m)
    if f_values is None:
        f_values = np.array([f_of(net, m, p) for p in range(d)], dtype=np.int64)
    gr, gi = _weighted_row(np.asarray(f_values), m, d)
    k = np.arange(d)
    re = np.zeros(d, dtype=np.int64)
    im = np.zeros(d, dtype=np.int64)
    for p in range(d):
        if gr[p] == 0 and gi[p] == 0:
            continue
        sign = 1 - 2 * (popcount_array(k & p) & 1)
        re += sign * gr[p]
        im += sign * gi[p]
    return re, im


def profile_direct_matrix(net: QuantumNet, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Explicit ``(-1)^(q.p')`` matrix-vector sum; O(d^2), fine up to n = 12."""
    d = net.d
    _check_m(net.n, m)
    gr, gi = _weighted_row(f_row(net, m), m, d)
    k = np.arange(d)
    re = np.zeros(d, dtype=np.int64)
    im = np.zeros(d, dtype=np.int64)
    block = max(1, (1 << 22) // d)
    for start in range(0, d, block):
        q = k[start:start + block, None]
        h = 1 - 2 * (popcount_array(q & k[None, :]) & 1)
        re[start:start + block] = h @ gr
        im[start:start + block] = h @ gi
    return re, im


# ------------------------------------------------------------ grid terms

def full_interference_term(net: QuantumNet, m: int, a: complex, b: complex) -> np.ndarray:
    """``2 Re{a b* <m|A(q,p)|0>}`` indexed by Pauli tuples [qt, pt]."""
    d = net.d
    prof = interference_profile(net, m)
    k = np.arange(d)
    osc = 1 - 2 * (popcount_array(k & m) & 1)
    grid = a * np.conj(b) * osc[None, :] * prof.F[:, None]
    return 2 * grid.real


def vertical_offset(net: QuantumNet) -> int:
    """Position tuple v of the vertical line that holds |0...0>.

    The vertical-ray eigenvalues are a character ``f_(0,p) = (-1)^(v.p)``, so
    the computational state |k> sits on the vertical line ``q = k + v``;
    v = 0 when every vertical generator sign is +1.
    """
    n = net.n
    f0 = f_row(net, 0)
    return sum(1 << (n - 1 - j) for j in range(n) if f0[1 << (n - 1 - j)] < 0)


def superposition_wigner(net: QuantumNet, m: int, a: complex, b: complex) -> np.ndarray:
    """Wigner table of a|0> + b|m> from the closed form, indexed [qt, pt]."""
    d = net.d
    if abs(abs(a) ** 2 + abs(b) ** 2 - 1) > 1e-12:
        raise ValueError("amplitudes are not normalised")
    v = vertical_offset(net)
    w = full_interference_term(net, m, a, b)
    w[v, :] += abs(a) ** 2 / d
    w[m ^ v, :] += abs(b) ** 2 / d
    return w


def superposition_wigner_field(net: QuantumNet, m: int, a: complex, b: complex) -> np.ndarray:
    return _to_field_order(net.cmap, superposition_wigner(net, m, a, b))


# ------------------------------------------------------------ localisation

_LOCAL_SIGN = (1, 1, -1, -1)  # required f / (-1)^(q_I.p') by (m.p') mod 4


def localized_net_for(
    cmap: CoordinateMap, m: int, q_i: int, base: QuantumNet | None = None
) -> QuantumNet:
    """A net whose profile for ``m`` lives on {q_I, q_I + m} only.

    Row m of the phase space meets the horizontal ray once and every oblique
    ray once; each oblique ray gets the generator signs that give
    ``f_(m,p') i^(m.p') = (-1)^(q_I.p') u(m.p')`` with u(even) = 1,
    u(odd) = i.  Rays not touched keep the signs of ``base`` (all +1 by
    default); the horizontal ray is reset to +1.
    """
    n, d = cmap.n, cmap.d
    _check_m(n, m)
    geo = net_geometry(cmap)
    net = base if base is not None else all_plus_net(cmap)
    neg = list(net.neg)
    neg[HORIZONTAL] = 0
    cm = int(geo.cmask[m, 0])
    low = cm & -cm
    for p in range(1, d):
        r = int(geo.ray[m, p])
        want = _LOCAL_SIGN[dot(m, p) % 4] * (-1 if dot(q_i, p) & 1 else 1)
        have = -1 if geo.eps[m, p] else 1
        neg[r] = 0 if want == have else low
    return QuantumNet(cmap, tuple(neg))


# ------------------------------------------------------------ overlap search

@dataclass
class OverlapResult:
    n: int
    patterns: int
    satisfying: int
    per_m: dict[int, int]
    witnesses: list[QuantumNet] = field(default_factory=list)


def overlap_search(
    cmap: CoordinateMap, chunk: int = 1 << 18, max_witnesses: int = 16
) -> OverlapResult:
    """Exhaustively look for nets with F_m(0) = 0 for every nonzero m.

    Only the oblique-ray signs enter F_m(0) once the horizontal ray is
    gauge-fixed to +1; vertical signs never do.  All ``2^(n(d-1))``
    patterns are scanned in vectorised chunks, the index packing ray
    k's signs at bits ``n*k .. n*k+n-1``.
    """
    n, d = cmap.n, cmap.d
    if n not in (2, 3):
        raise CapabilityError("exhaustive overlap search is implemented for n = 2 and 3")
    geo = net_geometry(cmap)
    nbits = n * (d - 1)
    total = 1 << nbits
    terms = []  # per m: list of (mask, eps, weight exponent)
    for m in range(1, d):
        row = []
        for p in range(d):
            r = int(geo.ray[m, p])
            if r == HORIZONTAL:
                mask = 0
            else:
                mask = int(geo.cmask[m, p]) << (n * (r - 2))
            row.append((mask, int(geo.eps[m, p]), dot(m, p) % 4))
        terms.append(row)
    satisfying = 0
    per_m = {m: 0 for m in range(1, d)}
    witnesses: list[QuantumNet] = []
    full = (1 << n) - 1
    for start in range(0, total, chunk):
        x = np.arange(start, min(total, start + chunk), dtype=np.int64)
        all_ok = np.ones(x.shape, dtype=bool)
        for m, row in zip(range(1, d), terms):
            re = np.zeros(x.shape, dtype=np.int64)
            im = np.zeros(x.shape, dtype=np.int64)
            for mask, eps, e in row:
                f = 1 - 2 * ((popcount_array(x & mask) + eps) & 1)
                re += _IPOW_RE[e] * f
                im += _IPOW_IM[e] * f
            ok = (re == 0) & (im == 0)
            per_m[m] += int(ok.sum())
            all_ok &= ok
        hits = x[all_ok]
        satisfying += len(hits)
        for h in hits[: max(0, max_witnesses - len(witnesses))]:
            neg = [0] * (d + 1)
            for k in range(d - 1):
                neg[2 + k] = (int(h) >> (n * k)) & full
            witnesses.append(QuantumNet(cmap, tuple(neg)))
    return OverlapResult(n, total, satisfying, per_m, witnesses)


def overlap_search_nets(nets: Iterable[QuantumNet]) -> tuple[int, int]:
    """(checked, satisfying) using scalar f's and direct sums at q = 0."""
    checked = satisfying = 0
    for net in nets:
        checked += 1
        ok = True
        for m in range(1, net.d):
            re = im = 0
            for p in range(net.d):
                f = f_of(net, m, p)
                e = dot(m, p) % 4
                re += int(_IPOW_RE[e]) * f
                im += int(_IPOW_IM[e]) * f
            if re or im:
                ok = False
                break
        satisfying += ok
    return checked, satisfying


def random_overlap_search(cmap: CoordinateMap, samples: int, seed: int) -> tuple[int, int]:
    """Sample random nets at any n and count those avoiding the overlap."""
    d = cmap.d
    rng = np.random.default_rng(seed)
    found = 0
    for _ in range(samples):
        net = random_net(cmap, int(rng.integers(0, 2**63)))
        f = f_table(net)
        ok = True
        for m in range(1, d):
            gr, gi = _weighted_row(f[m], m, d)
            if gr.sum() == 0 and gi.sum() == 0:
                continue
            ok = False
            break
        found += ok
    return samples, found


# ------------------------------------------------------------ statistics

def normalized_entropy(values) -> float | None:
    """``-sum P log_d P`` of the normalised profile; None if all zero."""
    v = np.asarray(values, dtype=float)
    if np.any(v < 0):
        raise ValueError("entropy needs nonnegative values")
    d = v.size
    total = v.sum()
    if total == 0:
        return None
    if d == 1:
        return 0.0
    p = v[v > 0] / total
    return float(-np.sum(p * np.log(p)) / np.log(d))


def _row_entropies(a: np.ndarray) -> np.ndarray:
    """Normalised entropies of each row of a nonnegative array; nan if zero."""
    d = a.shape[1]
    tot = a.sum(axis=1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        p = a / tot
        terms = np.where(p > 0, p * np.log(np.where(p > 0, p, 1.0)), 0.0)
    s = -terms.sum(axis=1) / np.log(d)
    return np.where(tot[:, 0] > 0, s, np.nan)


@dataclass
class ExperimentRecord:
    n: int
    net_seed: int
    m: int
    maxR: float  # max R(q) times d
    maxI: float
    entropyR: float | None
    entropyI: float | None
    degenerate_flag: int  # bit 0: R all zero, bit 1: I all zero

    def csv_row(self) -> str:
        def fmt(x):
            return "" if x is None else repr(float(x))

        return ",".join(
            [
                str(self.n),
                str(self.net_seed),
                tuple_str(self.m, self.n),
                fmt(self.maxR),
                fmt(self.maxI),
                fmt(self.entropyR),
                fmt(self.entropyI),
                str(self.degenerate_flag),
            ]
        )


RECORD_HEADER = "n,seed,m_bits,maxR,maxI,entropyR,entropyI,degenerate"
AGGREGATE_HEADER = "n,mean_ratio,mean_dev_ratio,mean_entropy,mean_dev_entropy"
AGGREGATE_RI_HEADER = (
    "n,mean_ratio_R,mean_dev_ratio_R,mean_ratio_I,mean_dev_ratio_I,"
    "mean_entropy_R,mean_dev_entropy_R,mean_entropy_I,mean_dev_entropy_I,degenerate_R,degenerate_I"
)


def net_seed(master_seed: int, n: int, index: int) -> int:
    ss = np.random.SeedSequence([master_seed, n, index])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def profile_records(cmap: CoordinateMap, seed: int) -> list[ExperimentRecord]:
    """One record per nonzero m for the random net drawn with ``seed``."""
    n, d = cmap.n, cmap.d
    net = random_net(cmap, seed)
    f = f_table(net)[1:].astype(np.int64)
    m = np.arange(1, d)
    e = popcount_array(m[:, None] & np.arange(d)[None, :]) % 4
    re = fwht(f * _IPOW_RE[e], axis=1)
    im = fwht(f * _IPOW_IM[e], axis=1)
    ar, ai = np.abs(re), np.abs(im)
    max_r = ar.max(axis=1) / d  # (max |re| / d^2) * d
    max_i = ai.max(axis=1) / d
    ent_r = _row_entropies(ar.astype(float))
    ent_i = _row_entropies(ai.astype(float))
    out = []
    for idx in range(d - 1):
        er = None if np.isnan(ent_r[idx]) else float(ent_r[idx])
        ei = None if np.isnan(ent_i[idx]) else float(ent_i[idx])
        flag = (er is None) | ((ei is None) << 1)
        out.append(ExperimentRecord(n, seed, idx + 1, float(max_r[idx]), float(max_i[idx]), er, ei, flag))
    return out


def _work(item: tuple[int, int]) -> list[ExperimentRecord]:
    n, seed = item
    return profile_records(default_cmap(n), seed)


def _mean_dev(values: Sequence[float]) -> tuple[float, float]:
    if not values:
        return math.nan, math.nan
    mean = math.fsum(values) / len(values)
    return mean, math.fsum(abs(v - mean) for v in values) / len(values)


@dataclass
class Aggregate:
    n: int
    mean_ratio: float
    mean_dev_ratio: float
    mean_entropy: float
    mean_dev_entropy: float
    ratio_R: tuple[float, float]
    ratio_I: tuple[float, float]
    entropy_R: tuple[float, float]
    entropy_I: tuple[float, float]
    degenerate_R: int
    degenerate_I: int

    def csv_row(self) -> str:
        return ",".join(
            [str(self.n)] + [repr(float(v)) for v in (self.mean_ratio, self.mean_dev_ratio, self.mean_entropy, self.mean_dev_entropy)]
        )

    def csv_row_ri(self) -> str:
        vals = [*self.ratio_R, *self.ratio_I, *self.entropy_R, *self.entropy_I]
        return ",".join([str(self.n)] + [repr(float(v)) for v in vals] + [str(self.degenerate_R), str(self.degenerate_I)])


def aggregate(records: Sequence[ExperimentRecord]) -> list[Aggregate]:
    """Per-n means and mean deviations, pooling the R and I statistics.

    Sums use math.fsum, so results do not depend on record order.
    """
    by_n: dict[int, list[ExperimentRecord]] = {}
    for rec in records:
        by_n.setdefault(rec.n, []).append(rec)
    out = []
    for n in sorted(by_n):
        recs = by_n[n]
        rr = [r.maxR for r in recs]
        ri = [r.maxI for r in recs]
        er = [r.entropyR for r in recs if r.entropyR is not None]
        ei = [r.entropyI for r in recs if r.entropyI is not None]
        mr, dr = _mean_dev(rr + ri)
        me, de = _mean_dev(er + ei)
        out.append(
            Aggregate(
                n, mr, dr, me, de,
                _mean_dev(rr), _mean_dev(ri), _mean_dev(er), _mean_dev(ei),
                sum(r.degenerate_flag & 1 for r in recs),
                sum((r.degenerate_flag >> 1) & 1 for r in recs),
            )
        )
    return out


def run_average_experiment(
    n_min: int, n_max: int, nets_per_n: int, master_seed: int, threads: int = 1
) -> tuple[list[ExperimentRecord], list[Aggregate]]:
    """Random-net statistics of the interference profile for every m != 0.

    Work items are (n, net seed); seeds come from the master seed alone, and
    records are returned in (n, net index, m) order whatever the worker count.
    """
    if not 1 <= n_min <= n_max <= MAX_QUBITS:
        raise CapabilityError(f"n range {n_min}..{n_max} outside 1..{MAX_QUBITS}")
    items = [(n, net_seed(master_seed, n, i)) for n in range(n_min, n_max + 1) for i in range(nets_per_n)]
    if threads <= 1:
        chunks = [_work(it) for it in items]
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(_work, items))
    records = [rec for chunk in chunks for rec in chunk]
    return records, aggregate(records)


@dataclass
class FitResult:
    slope: float
    intercept: float
    r_squared: float
    points: int


def fit_exponential(points: Sequence[tuple[float, float]]) -> FitResult:
    """Least-squares line through (n, ln ratio)."""
    if len(points) < 3:
        raise ValueError("need at least three points")
    if any(y <= 0 for _, y in points):
        raise ValueError("ratios must be positive")
    x = np.array([p[0] for p in points], dtype=float)
    y = np.log([p[1] for p in points])
    xm, ym = x.mean(), y.mean()
    sxx = np.sum((x - xm) ** 2)
    if sxx == 0:
        raise ValueError("all n values are equal")
    slope = float(np.sum((x - xm) * (y - ym)) / sxx)
    intercept = float(ym - slope * xm)
    ss_tot = float(np.sum((y - ym) ** 2))
    ss_res = float(np.sum((y - (intercept + slope * x)) ** 2))
    r2 = 1.0 if ss_tot <= 1e-300 else max(0.0, min(1.0, 1.0 - ss_res / ss_tot))
    return FitResult(slope, intercept, r2, len(points))


def records_csv(records: Sequence[ExperimentRecord]) -> str:
    return "\n".join([RECORD_HEADER] + [r.csv_row() for r in records]) + "\n"


def aggregates_csv(aggs: Sequence[Aggregate]) -> str:
    return "\n".join([AGGREGATE_HEADER] + [a.csv_row() for a in aggs]) + "\n"


def aggregates_ri_csv(aggs: Sequence[Aggregate]) -> str:
    return "\n".join([AGGREGATE_RI_HEADER] + [a.csv_row_ri() for a in aggs]) + "\n"
