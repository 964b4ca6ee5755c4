import itertools

import pytest
from hypothesis import given, settings, strategies as st

from gfwigner.errors import CapabilityError
from gfwigner.field import (
    MAX_QUBITS,
    PRIMITIVE_POLYS,
    build_coordinate_map,
    companion_matrix,
    default_cmap,
    fe_add,
    fe_inv,
    fe_mul,
    gf2_rank,
    identity_matrix,
    int_to_tuple,
    make_field,
    mat_pow,
    parse_tuple,
    tuple_str,
    tuple_to_int,
)


def poly_mulmod(a, b, poly, n):
    """Independent oracle: schoolbook carry-less product, then long division."""
    prod = 0
    for i in range(n):
        if (b >> i) & 1:
            prod ^= a << i
    for k in range(2 * n - 2, n - 1, -1):
        if (prod >> k) & 1:
            prod ^= poly << (k - n)
    return prod


@pytest.mark.parametrize("n", range(1, MAX_QUBITS + 1))
def test_generator_is_primitive(n):
    f = make_field(n)
    d = f.d
    seen = set()
    v = 1
    for _ in range(d - 1):
        seen.add(v)
        v = poly_mulmod(v, f.generator, f.poly, n) if n > 1 else v
    assert v == 1
    assert len(seen) == d - 1
    assert f.power(d - 1) == 1


@pytest.mark.parametrize("n", range(1, 7))
def test_field_axioms_exhaustive(n):
    f = make_field(n)
    els = range(f.d)
    for a in els:
        assert fe_add(f, a, 0) == a and fe_add(f, a, a) == 0
        assert fe_mul(f, a, 1) == a
        if a:
            assert fe_mul(f, a, fe_inv(f, a)) == 1
        for b in els:
            assert fe_mul(f, a, b) == poly_mulmod(a, b, f.poly, n)
    if n <= 4:
        for a, b, c in itertools.product(els, repeat=3):
            assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
            assert f.mul(a, b ^ c) == f.mul(a, b) ^ f.mul(a, c)


@settings(max_examples=300, deadline=None)
@given(st.integers(7, MAX_QUBITS), st.data())
def test_large_field_mul_matches_oracle(n, data):
    f = make_field(n)
    a = data.draw(st.integers(0, f.d - 1))
    b = data.draw(st.integers(0, f.d - 1))
    c = data.draw(st.integers(0, f.d - 1))
    assert f.mul(a, b) == poly_mulmod(a, b, f.poly, n) == f.mul_slow(a, b)
    assert f.mul(a, b ^ c) == f.mul(a, b) ^ f.mul(a, c)
    if a:
        assert f.mul(a, f.inv(a)) == 1


def test_small_field_examples():
    g4 = make_field(2)
    w = g4.generator
    assert w == 0b10
    assert fe_add(g4, w, 1) == 0b11 == g4.power(2)
    assert fe_mul(g4, w, w) == g4.power(2)
    assert fe_inv(g4, w) == g4.power(2)
    g8 = make_field(3)
    assert fe_mul(g8, g8.power(2), g8.power(2)) == g8.power(4) == (g8.power(2) ^ g8.power(1))
    assert fe_inv(g8, g8.power(3)) == g8.power(4)
    assert fe_inv(g8, 1) == 1


def test_errors():
    f = make_field(3)
    with pytest.raises(ZeroDivisionError):
        fe_inv(f, 0)
    with pytest.raises(CapabilityError):
        make_field(13)
    with pytest.raises(CapabilityError):
        make_field(0)
    with pytest.raises(ValueError):
        make_field(4, 0b11111)  # irreducible, not primitive
    with pytest.raises(ValueError):
        build_coordinate_map(f, 0, 1)


def test_default_polynomials_match_table():
    # x^n + lower terms, as listed for the defaults
    expected = {2: [2, 1, 0], 3: [3, 1, 0], 4: [4, 1, 0], 5: [5, 2, 0], 6: [6, 1, 0], 7: [7, 1, 0],
                8: [8, 4, 3, 2, 0], 9: [9, 4, 0], 10: [10, 3, 0], 11: [11, 2, 0], 12: [12, 6, 4, 1, 0]}
    for n, exps in expected.items():
        assert PRIMITIVE_POLYS[n] == sum(1 << e for e in exps)


def test_companion_matrix_order():
    for n in range(1, 9):
        f = make_field(n)
        m = companion_matrix(f)
        assert mat_pow(m, f.d - 1, n) == identity_matrix(n)
        for k in range(1, f.d - 1):
            if (f.d - 1) % k == 0:
                assert mat_pow(m, k, n) != identity_matrix(n) or n == 1


def test_coordinate_map_n2():
    cm = default_cmap(2)
    spec = cm.spec
    assert companion_matrix(spec) == (0b01, 0b11)
    assert [tuple_str(cm.q_power(j), 2) for j in range(3)] == ["10", "01", "11"]
    assert [tuple_str(cm.p_power(j), 2) for j in range(3)] == ["10", "01", "11"]
    assert cm.q_of[0] == 0 and cm.p_of[0] == 0


def test_coordinate_map_n3_independent():
    cm = default_cmap(3)
    assert gf2_rank([cm.q_power(j) for j in range(3)]) == 3
    assert gf2_rank([cm.p_power(j) for j in range(3)]) == 3


@pytest.mark.parametrize("n", range(1, MAX_QUBITS + 1))
def test_coordinate_maps_bijective(n):
    cm = default_cmap(n)
    assert sorted(cm.q_of) == list(range(cm.d))
    assert sorted(cm.p_of) == list(range(cm.d))
    assert all(cm.q_inv[cm.q_of[a]] == a for a in range(cm.d))


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 8), st.data())
def test_nondefault_bases(n, data):
    spec = make_field(n)
    q0 = data.draw(st.integers(1, spec.d - 1))
    p0 = data.draw(st.integers(1, spec.d - 1))
    cm = build_coordinate_map(spec, q0, p0)
    assert sorted(cm.q_of) == list(range(spec.d))
    assert gf2_rank([cm.q_power(j) for j in range(n)]) == n


@given(st.lists(st.integers(0, 1), min_size=1, max_size=12))
def test_tuple_roundtrip(bits):
    v = tuple_to_int(bits)
    assert int_to_tuple(v, len(bits)) == tuple(bits)
    assert parse_tuple("".join(map(str, bits)), len(bits)) == v


def test_parse_tuple_rejects():
    with pytest.raises(ValueError):
        parse_tuple("012")
    with pytest.raises(ValueError):
        parse_tuple("101", 2)
