import random

import pytest
from hypothesis import given, settings, strategies as st

from asw_moduli import GF, RatFunc, WittVector, asw_isogeny, same_cover, witt_add, witt_int_mul, witt_neg
from asw_moduli.errors import ShapeMismatch
from asw_moduli.parse import parse_ratfunc
from asw_moduli.witt import (build_sum_polynomials, format_integer_poly, ghost_check, integer_sum_polynomials,
                             witt_int_mul_by_addition, witt_sub)

from oracles import ghost_add_integers, ghost_add_laurent


def W(p, *entries, K=None):
    K = K or GF(p)
    return WittVector(p, [parse_ratfunc(e, K) for e in entries], K)


def test_sum_polynomial_examples():
    t2 = build_sum_polynomials(2, 2)
    assert format_integer_poly(t2.add[1], None) == "X0*Y0+X1+Y1"
    assert format_integer_poly(t2.add[0], None) == "X0+Y0"
    assert format_integer_poly(t2.neg[1], ["X0", "X1"]) == "X0^2+X1"
    t3 = build_sum_polynomials(3, 2)
    assert format_integer_poly(t3.add[1], None) == "2*X0^2*Y0+2*X0*Y0^2+X1+Y1"


@pytest.mark.parametrize("p,n", [(2, 3), (3, 3), (5, 2)])
def test_ghost_identity(p, n):
    assert ghost_check(p, n)


def test_table_json_round_trip():
    from asw_moduli.witt import SumPolynomialTable
    t = build_sum_polynomials(3, 3)
    again = SumPolynomialTable.from_json(t.to_json())
    assert again.add == t.add and again.neg == t.neg


def test_spec_examples():
    u = W(2, "x", "x^2")
    assert witt_add(W(2, "x", "0"), u) == W(2, "0", "0")     # (x,0)+(x,x^2): x^2 + x*x = 0
    assert witt_add(W(2, "x", "0"), W(2, "x", "0")) == W(2, "0", "x^2")
    assert witt_neg(W(2, "x", "1/x")) == W(2, "x", "x^2+1/x")
    assert asw_isogeny(W(2, "x", "0")) == W(2, "x^2+x", "x^3+x^2")
    assert asw_isogeny(W(3, "1", "2", "1")).is_zero()
    assert same_cover(W(2, "1/x"), W(2, "1/x+x^2+x"))


def test_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        witt_add(W(2, "x"), W(2, "x", "0"))


# -- ghost oracle over the integers ---------------------------------------------


@settings(max_examples=300)
@given(st.sampled_from([(2, 1), (2, 2), (2, 3), (3, 2), (3, 3), (5, 2), (5, 3)]), st.data())
def test_constant_add_matches_ghost(pn, data):
    p, n = pn
    xs = data.draw(st.lists(st.integers(0, p - 1), min_size=n, max_size=n))
    ys = data.draw(st.lists(st.integers(0, p - 1), min_size=n, max_size=n))
    K = GF(p)
    u = WittVector(p, [RatFunc.const(K, a) for a in xs], K)
    v = WittVector(p, [RatFunc.const(K, a) for a in ys], K)
    want = [s % p for s in ghost_add_integers(p, xs, ys)]
    got = witt_add(u, v)
    assert [f.constant_value() if not f.is_zero() else 0 for f in got.entries] == want


laurent = st.dictionaries(st.integers(-2, 2), st.integers(1, 4), max_size=2)


def to_ratfunc(K, d):
    f = RatFunc.zero(K)
    for e, c in d.items():
        c %= K.p
        if c:
            f = f + RatFunc.const(K, c) * RatFunc.x(K) ** e
    return f


def ghost_case(p, n, data):
    xs = [{e: c % p for e, c in data.draw(laurent).items() if c % p} for _ in range(n)]
    ys = [{e: c % p for e, c in data.draw(laurent).items() if c % p} for _ in range(n)]
    K = GF(p)
    u = WittVector(p, [to_ratfunc(K, x) for x in xs], K)
    v = WittVector(p, [to_ratfunc(K, y) for y in ys], K)
    want = WittVector(p, [to_ratfunc(K, s) for s in ghost_add_laurent(p, xs, ys)], K)
    return u, v, want


@settings(max_examples=200)
@given(st.sampled_from([(2, 3), (3, 3), (3, 2), (5, 2), (2, 2)]), st.data())
def test_laurent_add_matches_ghost(pn, data):
    """Witt addition of Laurent polynomial vectors against the ghost oracle."""
    p, n = pn
    u, v, want = ghost_case(p, n, data)
    assert witt_add(u, v) == want


def test_laurent_add_matches_ghost_p5_n3():
    """The n = 3, p = 5 case: 50 fixed pairs (oracle powers reach degree 50)."""
    rng = random.Random(5)
    p, n = 5, 3
    K = GF(p)
    for _ in range(50):
        xs = [{rng.randint(-1, 1): rng.randint(1, 4)} for _ in range(n)]
        ys = [{rng.randint(-1, 1): rng.randint(1, 4)} for _ in range(n)]
        u = WittVector(p, [to_ratfunc(K, x) for x in xs], K)
        v = WittVector(p, [to_ratfunc(K, y) for y in ys], K)
        want = WittVector(p, [to_ratfunc(K, s) for s in ghost_add_laurent(p, xs, ys)], K)
        assert witt_add(u, v) == want


def random_vector(p, n, data, K=None):
    K = K or GF(p)
    ents = []
    for _ in range(n):
        d = data.draw(st.dictionaries(st.tuples(st.integers(0, p - 1), st.integers(1, 3)), st.integers(1, p - 1), max_size=2))
        f = RatFunc.zero(K)
        for (pt, k), c in d.items():
            f = f + RatFunc.pole_term(K, c, pt, k)
        ents.append(f)
    return WittVector(p, ents, K)


@settings(max_examples=200)
@given(st.sampled_from([(2, 2), (2, 3), (3, 2), (5, 2)]), st.data())
def test_group_laws(pn, data):
    p, n = pn
    u, v, w = (random_vector(p, n, data) for _ in range(3))
    assert witt_add(u, v) == witt_add(v, u)
    assert witt_add(witt_add(u, v), w) == witt_add(u, witt_add(v, w))
    assert witt_add(u, witt_neg(u)).is_zero()
    assert witt_sub(witt_add(u, v), v) == u
    assert asw_isogeny(witt_add(u, v)) == witt_add(asw_isogeny(u), asw_isogeny(v))


@settings(max_examples=200)
@given(st.sampled_from([(2, 2), (2, 3), (3, 2)]), st.integers(0, 30), st.data())
def test_integer_multiples(pn, m, data):
    p, n = pn
    u = random_vector(p, n, data)
    assert witt_int_mul(m, u) == witt_int_mul_by_addition(m, u)
    assert witt_int_mul(1, u) == u
    assert witt_int_mul(p ** n, u).is_zero()


@settings(max_examples=200)
@given(st.sampled_from([(2, 2), (3, 2), (5, 1), (2, 3)]), st.data())
def test_same_cover_orbits(pn, data):
    p, n = pn
    u = random_vector(p, n, data)
    h = random_vector(p, n, data)
    m = data.draw(st.sampled_from([k for k in range(1, p ** n) if k % p]))
    assert same_cover(u, u)
    assert same_cover(u, witt_add(witt_int_mul(m, u), asw_isogeny(h)))


def test_frobenius_verschiebung():
    u = W(3, "x", "1/x")
    assert u.frobenius() == W(3, "x^3", "1/x^3")
    assert u.verschiebung() == W(3, "0", "x")
    assert witt_int_mul(3, u) == u.frobenius().verschiebung()


def test_integer_sum_polynomials_small():
    polys = integer_sum_polynomials(2, 2)
    assert len(polys) == 2
