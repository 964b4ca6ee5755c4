import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gfwigner.errors import CapabilityError
from gfwigner.field import default_cmap, parse_tuple
from gfwigner.geometry import HORIZONTAL, VERTICAL, all_lines, points_of_line, ray, translate_line
from gfwigner.net import (
    QuantumNet,
    all_plus_net,
    count_nets,
    decompose,
    enumerate_nets,
    f_of,
    f_row,
    f_table,
    line_projector,
    mub_bases,
    net_from_json,
    net_to_json,
    projector_vector,
    random_net,
    ray_projector,
)
from gfwigner.pauli import dense_matrix, ray_generators, translation_op


def t(s):
    return parse_tuple(s)


def f_by_eigen(net, qt, pt):
    """Oracle: project onto the common +-1 eigenvector of the ray generators
    (dense eigensolve) and read off <T(beta)>."""
    cmap = net.cmap
    r = decompose(cmap, qt, pt)[0]
    d = cmap.d
    proj = np.eye(d, dtype=complex)
    for j, g in enumerate(ray_generators(cmap, r)):
        s = -1 if (net.neg[r] >> j) & 1 else 1
        proj = proj @ (np.eye(d) + s * dense_matrix(g)) / 2
    w, v = np.linalg.eigh(proj)
    vec = v[:, np.argmax(w)]
    return np.vdot(vec, dense_matrix(translation_op(cmap.n, qt, pt)) @ vec).real


@pytest.mark.parametrize("n", [1, 2, 3])
def test_f_of_matches_eigen_oracle(n):
    cmap = default_cmap(n)
    for seed in range(3):
        net = random_net(cmap, seed)
        for qt in range(cmap.d):
            for pt in range(cmap.d):
                if qt or pt:
                    assert f_of(net, qt, pt) == round(f_by_eigen(net, qt, pt))


def test_generator_relations_all_nets_n2():
    cmap = default_cmap(2)
    for net in enumerate_nets(cmap):
        assert f_of(net, t("11"), t("10")) == -f_of(net, t("10"), t("01")) * f_of(net, t("01"), t("11"))
        assert f_of(net, t("11"), t("11")) == f_of(net, t("10"), t("10")) * f_of(net, t("01"), t("01"))
        assert f_of(net, 0, 0) == 1


@pytest.mark.parametrize("n", range(1, 8))
def test_vectorised_table_matches_scalar(n):
    cmap = default_cmap(n)
    rng = np.random.default_rng(n)
    for seed in range(2):
        net = random_net(cmap, 100 + seed)
        ft = f_table(net)
        assert ft[0, 0] == 1 and set(np.unique(ft)) <= {-1, 1}
        pts = [(int(a), int(b)) for a, b in rng.integers(0, cmap.d, size=(200, 2))]
        for qt, pt in pts:
            assert ft[qt, pt] == f_of(net, qt, pt)
        m = int(rng.integers(1, cmap.d))
        assert np.array_equal(f_row(net, m), ft[m])


@pytest.mark.parametrize("n", [1, 2, 3])
def test_eq9_dense(n):
    cmap = default_cmap(n)
    net = random_net(cmap, 7)
    for r in range(cmap.d + 1):
        proj = ray_projector(net, r)
        for q, p in points_of_line(cmap.spec, ray(r)):
            qt, pt = cmap.q_of[q], cmap.p_of[p]
            val = np.trace(proj @ dense_matrix(translation_op(n, qt, pt)))
            assert abs(val - f_of(net, qt, pt)) < 1e-12


@pytest.mark.parametrize("n", [1, 2, 3])
def test_projectors_rank_one_and_covariant(n):
    cmap = default_cmap(n)
    spec = cmap.spec
    net = random_net(cmap, 3)
    rng = np.random.default_rng(0)
    for line in all_lines(spec):
        pr = line_projector(net, line)
        assert np.allclose(pr @ pr, pr, atol=1e-12)
        assert abs(np.trace(pr) - 1) < 1e-12
        # any point of the line can serve as the translation anchor
        for q, p in points_of_line(spec, line):
            tm = dense_matrix(translation_op(n, cmap.q_of[q], cmap.p_of[p]))
            assert np.allclose(tm @ ray_projector(net, line.striation) @ tm.conj().T, pr, atol=1e-12)
        dq, dp = (int(x) for x in rng.integers(0, cmap.d, 2))
        moved = line_projector(net, translate_line(spec, line, (dq, dp)))
        tm = dense_matrix(translation_op(n, cmap.q_of[dq], cmap.p_of[dp]))
        assert np.allclose(moved, tm @ pr @ tm.conj().T, atol=1e-12)


def test_projector_examples():
    c1 = default_cmap(1)
    plus = np.full((2, 2), 0.5)
    assert np.allclose(ray_projector(all_plus_net(c1), HORIZONTAL), plus)
    for n in (1, 2, 3):
        cm = default_cmap(n)
        e0 = np.zeros((cm.d, cm.d))
        e0[0, 0] = 1
        assert np.allclose(ray_projector(all_plus_net(cm), VERTICAL), e0)
    c2 = default_cmap(2)
    net = random_net(c2, 5)
    pr = ray_projector(net, 2)
    v = projector_vector(pr)
    for j, g in enumerate(ray_generators(c2, 2)):
        s = -1 if (net.neg[2] >> j) & 1 else 1
        assert np.allclose(dense_matrix(g) @ v, s * v)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_mub(n):
    cmap = default_cmap(n)
    d = cmap.d
    for seed in range(3):
        bases = mub_bases(random_net(cmap, seed))
        vecs = [[projector_vector(p) for p in row] for row in bases]
        for a, row_a in enumerate(vecs):
            g = np.array([[abs(np.vdot(u, v)) ** 2 for v in row_a] for u in row_a])
            assert np.allclose(g, np.eye(d), atol=1e-10)
            for row_b in vecs[a + 1:]:
                ov = np.array([[abs(np.vdot(u, v)) ** 2 for v in row_b] for u in row_a])
                assert np.allclose(ov, 1 / d, atol=1e-10)
    vert = mub_bases(all_plus_net(cmap))[VERTICAL]
    for p in vert:
        assert np.allclose(p, np.diag(np.diag(p)))


def test_random_net_determinism_and_spread():
    cmap = default_cmap(2)
    assert random_net(cmap, 42) == random_net(cmap, 42)
    assert sum(len(r) for r in random_net(cmap, 1).gen_signs) == 10
    draws = {random_net(cmap, s).neg for s in range(100)}
    assert len(draws) >= 90


def test_enumeration_counts():
    c2 = default_cmap(2)
    assert sum(1 for _ in enumerate_nets(c2)) == 1024 == count_nets(c2)
    obl = list(enumerate_nets(c2, restrict_to=range(2, 5)))
    assert len(obl) == 64 and len(set(n.neg for n in obl)) == 64
    assert all(n.neg[HORIZONTAL] == 0 for n in obl)
    c3 = default_cmap(3)
    assert count_nets(c3, restrict_to=range(2, 9)) == 2**21
    with pytest.raises(CapabilityError):
        next(enumerate_nets(c3))


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**63))
def test_json_roundtrip(n, seed):
    net = random_net(default_cmap(n), seed)
    text = net_to_json(net)
    back = net_from_json(text)
    assert back == net
    assert net_to_json(back) == text
    obj = json.loads(text)
    assert set(obj) == {"n", "poly", "gen_signs"}
    assert len(obj["gen_signs"]) == net.d + 1


def test_invalid_nets():
    cmap = default_cmap(2)
    with pytest.raises(ValueError):
        QuantumNet(cmap, (0,) * 4)
    with pytest.raises(ValueError):
        QuantumNet(cmap, (4,) + (0,) * 4)
    with pytest.raises(ValueError):
        QuantumNet.from_signs(cmap, [[1, 0]] * 5)
