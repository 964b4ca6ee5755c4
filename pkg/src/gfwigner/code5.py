"""The five-qubit perfect code in a code-adapted phase space.

Translations are rebuilt from ``X'_j = S_j = Z_(j-1) X_(j) Z_(j+1)`` and
``Z'_j = Z_(j)``; the net and Wigner machinery is reused unchanged through
:class:`~gfwigner.pauli.TranslationBasis`.  In this frame |0>_L is the
horizontal ray, |1>_L the horizontal line p = 11111, and every single-qubit
Pauli error is a translation whose momentum offset is its syndrome.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .field import CoordinateMap, default_cmap, dot, tuple_str
from .net import QuantumNet, all_plus_net, net_geometry
from .pauli import (
    PauliElement,
    TranslationBasis,
    dense_matrix,
    pauli_mul,
    pauli_product,
    single,
)
from .wigner import TOL, WignerTable, wigner_of_state

N = 5
D = 1 << N
M_LOGICAL = D - 1  # the tuple 11111
_LOCAL_SIGN = (1, 1, -1, -1)


def _site(j: int) -> int:
    """Cyclic 1-based site index."""
    return (j - 1) % N + 1


def stabilizer(j: int) -> PauliElement:
    return pauli_product(
        [single(N, "Z", _site(j - 1)), single(N, "X", _site(j)), single(N, "Z", _site(j + 1))], N
    )


@dataclass(frozen=True)
class CodeFrame:
    stabilizers: tuple[PauliElement, ...]
    basis: TranslationBasis
    logical_z: PauliElement  # S~ = S_1 ... S_5
    logical_x: PauliElement  # Z on every qubit
    zero_l: np.ndarray
    one_l: np.ndarray
    cmap: CoordinateMap

    def encode(self, a: complex, b: complex) -> np.ndarray:
        return a * self.zero_l + b * self.one_l


@lru_cache(maxsize=1)
def build_code_frame() -> CodeFrame:
    stabs = tuple(stabilizer(j) for j in range(1, N + 1))
    basis = TranslationBasis(stabs, tuple(single(N, "Z", j) for j in range(1, N + 1)))
    s_tilde = pauli_product(list(stabs), N)
    x_l = pauli_product([single(N, "Z", j) for j in range(1, N + 1)], N)
    v = np.zeros(D, dtype=complex)
    v[0] = 1
    for s in stabs:
        v = 0.5 * (v + dense_matrix(s) @ v)
    v /= np.linalg.norm(v)
    first = v[np.flatnonzero(np.abs(v) > 1e-12)[0]]
    v *= abs(first) / first
    one = dense_matrix(x_l) @ v
    return CodeFrame(stabs, basis, s_tilde, x_l, v, one, default_cmap(N))


def frame_checks(frame: CodeFrame) -> dict[str, bool]:
    """Stabiliser eigenvalues, the sign of S~ and the commutation pattern."""
    z0, z1 = frame.zero_l, frame.one_l
    stab_ok = all(np.allclose(dense_matrix(s) @ z0, z0, atol=TOL) for s in frame.stabilizers)
    st = dense_matrix(frame.logical_z)
    pairs_ok = all(
        np.allclose(dense_matrix(pauli_mul(a, b)) @ z1, z1, atol=TOL)
        for a, b in itertools.combinations(frame.stabilizers, 2)
    )
    minus_x = PauliElement(N, 2, M_LOGICAL, 0)
    return {
        "stabilizers_fix_zero": stab_ok,
        "pairs_fix_one": pairs_ok,
        "s_tilde_is_minus_xxxxx": bool(frame.logical_z == minus_x),
        "s_tilde_zero_plus": bool(np.allclose(st @ z0, z0, atol=TOL)),
        "s_tilde_one_minus": bool(np.allclose(st @ z1, -z1, atol=TOL)),
        "logicals_orthogonal": bool(abs(np.vdot(z0, z1)) < TOL),
        "unit_norm": bool(abs(np.linalg.norm(z0) - 1) < TOL and abs(np.linalg.norm(z1) - 1) < TOL),
        "commutation_pattern": frame.basis.check_relations(),
    }


def code_translation(q: int, p: int, frame: CodeFrame | None = None) -> PauliElement:
    """``T'(q, p) = i^(q.p) X'^q Z'^p`` as a physical Pauli."""
    frame = frame or build_code_frame()
    return frame.basis.translation(q, p)


def code_net_for(p_i: int, frame: CodeFrame | None = None) -> QuantumNet:
    """Net with interference confined to the lines p = p_I and p = p_I + 11111.

    Vertical and horizontal rays keep all-plus signs (so the horizontal ray
    is |0>_L); each oblique ray fixes its one point on the row p = 11111.
    """
    frame = frame or build_code_frame()
    cmap = frame.cmap
    geo = net_geometry(cmap)
    neg = list(all_plus_net(cmap).neg)
    m = M_LOGICAL
    for x in range(1, D):
        r = int(geo.ray[x, m])
        cm = int(geo.cmask[x, m])
        want = _LOCAL_SIGN[dot(x, m) % 4] * (-1 if dot(x, p_i) & 1 else 1)
        have = -1 if geo.eps[x, m] else 1
        neg[r] = 0 if want == have else cm & -cm
    return QuantumNet(cmap, tuple(neg))


def overlaps_logical_lines(p_i: int) -> bool:
    return p_i in (0, M_LOGICAL)


def code_wigner(net: QuantumNet, state, frame: CodeFrame | None = None) -> WignerTable:
    frame = frame or build_code_frame()
    return wigner_of_state(net, state, frame.basis)


def expected_code_wigner(a: complex, b: complex, p_i: int) -> np.ndarray:
    """Closed form of W' for a|0>_L + b|1>_L, indexed by tuples [q, p]."""
    w = np.zeros((D, D))
    w[:, 0] += abs(a) ** 2 / D
    w[:, M_LOGICAL] += abs(b) ** 2 / D
    z = a * np.conj(b)
    osc = np.array([-1.0 if dot(q, M_LOGICAL) & 1 else 1.0 for q in range(D)])
    w[:, p_i] += osc * (z.real + z.imag) / D
    w[:, p_i ^ M_LOGICAL] += osc * (z.real - z.imag) / D
    return w


# ---------------------------------------------------------------- errors

ERROR_KINDS = ("X", "Y", "Z")


def error_p_offset(kind: str, j: int) -> int:
    """Momentum offset of a single-qubit error (closed form)."""
    bit = lambda s: 1 << (N - _site(s))  # noqa: E731
    kind = kind.upper()
    if kind == "Z":
        return bit(j)
    if kind == "X":
        return bit(j - 1) ^ bit(j + 1)
    if kind == "Y":
        return bit(j - 1) ^ bit(j) ^ bit(j + 1)
    raise ValueError(f"unknown error kind {kind!r}")


def error_offset(error: PauliElement, frame: CodeFrame | None = None) -> tuple[int, int]:
    """Phase-space offset (q, p) with ``error = phase * T'(q, p)``."""
    frame = frame or build_code_frame()
    dq = error.qbits
    xpart = frame.basis.translation(dq, 0)
    return dq, error.pbits ^ xpart.pbits


def single_errors() -> list[tuple[str, int, PauliElement]]:
    return [(k, j, single(N, k, j)) for j in range(1, N + 1) for k in ERROR_KINDS]


def syndrome_analysis(
    frame: CodeFrame | None = None, states: int = 5, seed: int = 0
) -> dict:
    frame = frame or build_code_frame()
    errors = single_errors()
    offsets = {f"{k}{j}": error_offset(e, frame)[1] for k, j, e in errors}
    closed = {f"{k}{j}": error_p_offset(k, j) for k, j, _ in errors}
    vals = list(offsets.values())
    forbidden = {0, M_LOGICAL}
    distinct = len(set(vals)) == len(vals)
    none_forbidden = not any(v in forbidden for v in vals)
    diffs_ok = all((a ^ b) not in forbidden for a, b in itertools.combinations(vals, 2))

    rng = np.random.default_rng(seed)
    encoded = [frame.encode(1 / np.sqrt(2), 1 / np.sqrt(2))]
    for _ in range(states - 1):
        ab = rng.normal(size=2) + 1j * rng.normal(size=2)
        ab /= np.linalg.norm(ab)
        encoded.append(frame.encode(*ab))
    gram_max = 0.0
    code_overlap = 0.0
    for psi in encoded:
        vecs = [psi] + [dense_matrix(e) @ psi for _, _, e in errors]
        g = np.array([[np.vdot(u, v) for v in vecs] for u in vecs])
        gram_max = max(gram_max, float(np.max(np.abs(g - np.eye(len(vecs))))))
        for v in vecs[1:]:
            code_overlap = max(code_overlap, abs(np.vdot(frame.zero_l, v)), abs(np.vdot(frame.one_l, v)))

    degeneracies = []
    for j in range(1, N + 1):
        zz = pauli_mul(single(N, "Z", _site(j - 1)), single(N, "Z", _site(j + 1)))
        if error_offset(zz, frame)[1] == offsets[f"X{j}"]:
            degeneracies.append([f"Z{_site(j - 1)}Z{_site(j + 1)}", f"X{j}"])
    return {
        "offsets": {k: tuple_str(v, N) for k, v in offsets.items()},
        "offsets_match_closed_form": offsets == closed,
        "distinct": distinct,
        "avoid_logical_lines": none_forbidden,
        "differences_avoid_logical_lines": diffs_ok,
        "gram_max_offdiag": gram_max,
        "code_space_overlap_max": float(code_overlap),
        "orthogonal": bool(gram_max <= TOL and code_overlap <= TOL),
        "degeneracy_pairs": degeneracies,
        "degeneracy_classes": 1 if degeneracies else 0,
    }


def line_support(w: np.ndarray, tol: float = TOL) -> list[int]:
    """Momentum tuples p whose horizontal line carries nonzero values."""
    return [int(p) for p in np.flatnonzero(np.max(np.abs(w), axis=0) > tol)]


def code_report(p_i: int = 0b10000, seed: int = 0) -> dict:
    frame = build_code_frame()
    net = code_net_for(p_i, frame)
    checks = frame_checks(frame)
    tables = {}
    plus = frame.encode(1 / np.sqrt(2), 1 / np.sqrt(2))
    for name, vec in (("zero_L", frame.zero_l), ("one_L", frame.one_l), ("plus_L", plus)):
        w = code_wigner(net, vec, frame).by_tuple()
        tables[name] = {
            "lines": [tuple_str(p, N) for p in line_support(w)],
            "values": {tuple_str(p, N): [float(round(x, 12)) for x in w[:, p]] for p in line_support(w)},
        }
    expected = expected_code_wigner(1 / np.sqrt(2), 1 / np.sqrt(2), p_i)
    w_plus = code_wigner(net, plus, frame).by_tuple()
    return {
        "p_I": tuple_str(p_i, N),
        "interference_overlaps_logical_lines": overlaps_logical_lines(p_i),
        "frame_checks": checks,
        "tables": tables,
        "plus_formula_max_dev": float(np.max(np.abs(w_plus - expected))),
        "syndromes": syndrome_analysis(frame, seed=seed),
    }
