import pytest
from hypothesis import assume, given, settings, strategies as st

from asw_moduli import (GF, INF, BranchingDatum, RatFunc, WittVector, asw_isogeny, branching_datum, construct_cover,
                        deuring_shafarevich, genus_vector, p_rank_vector, reduce, swan, truncate, witt_add,
                        witt_int_mul, rational_function_field)
from asw_moduli.datum import canonical_rows
from asw_moduli.errors import FieldError, InvalidDatumError, OrderDropError
from asw_moduli.parse import parse_ratfunc
from asw_moduli.ramify import genus_riemann_hurwitz, is_reduced

from corpus import nonempty_tuples
from asw_moduli.moduli import enumerate_partitions
from oracles import brute_genus


def W(p, *entries, K=None):
    K = K or GF(p)
    return WittVector(p, [parse_ratfunc(e, K) for e in entries], K)


Z25 = ("1/x + 1/(x-1)", "1/(x-1)^7 + 1/(x-2)^12")


def test_reduce_examples():
    u = W(5, *Z25)
    w, h = reduce(u)
    assert w == u and h.is_zero()
    w, h = reduce(W(3, "x^3+x"))
    assert w == W(3, "2*x")
    assert witt_add(w, asw_isogeny(h)) == W(3, "x^3+x")


def test_reduce_family_over_parametric_field():
    T = rational_function_field(GF(2), "t")
    fam = W(2, "1/(x^2*(x-t^4))", "1/(x^3*(x-t^4)^2*(x-t^2)^2)", K=T)
    w, h = reduce(fam)
    assert witt_add(w, asw_isogeny(h)) == fam
    d, _ = branching_datum(w, reduced=True)
    t = T.gen.raw
    by_point = dict(zip(d.points, d.rows))
    assert by_point == {T.zero: (2, 3), T.pow(t, 4): (2, 3), T.pow(t, 2): (0, 2)}


def test_reduce_needs_pth_root():
    T = rational_function_field(GF(2), "t")
    with pytest.raises(FieldError):
        reduce(W(2, "1/(t*x^2)", K=T))


def test_branching_datum_examples():
    d, prof = branching_datum(W(5, *Z25))
    assert d.points == (0, 1, 2) and d.rows == ((2, 6), (2, 8), (0, 13))
    assert prof.jumps == ((1, 5), (1, 7), (-1, 12))
    d, _ = branching_datum(W(3, "x+1/x^2", "0"))
    assert dict(zip(d.points, d.rows)) == {0: (3, 7), INF: (2, 4)}
    d, _ = branching_datum(W(3, "x", "x^5+1/x^5"))
    assert dict(zip(d.points, d.rows)) == {0: (0, 6), INF: (2, 6)}


def test_order_drop():
    with pytest.raises(OrderDropError, match="order drop"):
        branching_datum(W(3, "2", "1/x"))
    with pytest.raises(OrderDropError):
        branching_datum(W(3, "x^3-x", "1/x"))


def test_genus_examples():
    assert genus_vector(BranchingDatum(3, ((2, 4), (3, 7)))) == (3, 30)
    assert genus_vector(BranchingDatum(3, ((2, 6), (0, 6)))) == (0, 30)
    for p in (2, 3, 5, 7):
        assert genus_vector(BranchingDatum(p, ((2,),))) == (0,)
    with pytest.raises(InvalidDatumError):
        genus_vector(BranchingDatum(2, ((3, 4),)))


def test_p_rank_examples():
    d = BranchingDatum(5, ((2, 6), (2, 8), (0, 13)))
    rep = p_rank_vector(d)
    assert rep["p_rank"][1] == 44 == deuring_shafarevich(d)
    assert rep["column_support"][-1] == d.r
    assert p_rank_vector(BranchingDatum(5, ((7,),)))["p_rank"] == (0,)


def test_swan_examples():
    assert swan(BranchingDatum(5, ((2, 6),)), 0, 2) == 128
    assert swan(BranchingDatum(5, ((0, 6),)), 0, 1) == 0
    d = BranchingDatum(3, ((2, 4), (3, 7)))
    assert swan(d, 0, 2) + swan(d, 1, 2) == 76 == 2 * 30 - 2 + 2 * 9


def test_construct_examples():
    u = construct_cover(BranchingDatum(5, ((2, 6), (2, 8), (0, 13)), (0, 1, 2)))
    d, _ = branching_datum(u)
    assert d.rows == ((2, 6), (2, 8), (0, 13))
    assert construct_cover(BranchingDatum(3, ((2,),), (0,))) == W(3, "1/x")
    u = construct_cover(BranchingDatum(2, ((2, 4), (2, 4)), (0, 1)))
    assert branching_datum(u)[0].rows == ((2, 4), (2, 4))


def test_truncate_examples():
    d = BranchingDatum(5, ((2, 6), (2, 8), (0, 13)), (0, 1, 2))
    assert truncate(d, 1).rows == ((2,), (2,)) and truncate(d, 1).points == (0, 1)
    assert truncate(d, 2) == d
    u = W(5, *Z25)
    assert truncate(branching_datum(u)[0], 1) == branching_datum(truncate(u, 1))[0]


# -- properties ------------------------------------------------------------------


def random_vector(p, n, data, K=None, max_order=8):
    K = K or GF(p)
    ents = []
    for _ in range(n):
        d = data.draw(st.dictionaries(st.tuples(st.sampled_from([0, 1, INF]), st.integers(0, max_order)),
                                      st.integers(1, p - 1), max_size=3))
        f = RatFunc.zero(K)
        for (pt, k), c in d.items():
            if pt is INF:
                f = f + RatFunc.const(K, c) * RatFunc.x(K) ** k
            elif k:
                f = f + RatFunc.pole_term(K, c, pt, k)
        ents.append(f)
    return WittVector(p, ents, K)


PN = st.sampled_from([(2, 2), (3, 2), (5, 2), (2, 3), (3, 1)])


@settings(max_examples=200)
@given(PN, st.data())
def test_reduce_idempotent_with_certificate(pn, data):
    p, n = pn
    u = random_vector(p, n, data)
    w, h = reduce(u)
    assert is_reduced(w)
    assert witt_add(w, asw_isogeny(h)) == u
    w2, h2 = reduce(w)
    assert w2 == w and h2.is_zero()


@settings(max_examples=200)
@given(PN, st.data())
def test_datum_invariant_under_shifts_and_units(pn, data):
    p, n = pn
    u = random_vector(p, n, data)
    h = random_vector(p, n, data, max_order=3)
    m = data.draw(st.sampled_from([k for k in range(1, p ** n) if k % p]))
    try:
        d, _ = branching_datum(u)
    except OrderDropError:
        assume(False)
    assert branching_datum(witt_add(u, asw_isogeny(h)))[0] == d
    assert branching_datum(witt_int_mul(m, u))[0] == d


@settings(max_examples=200)
@given(st.sampled_from(nonempty_tuples()), st.data())
def test_round_trip_sampled(dp, data):
    d, p = dp
    om = enumerate_partitions(d, p)
    M = om[data.draw(st.integers(0, len(om) - 1))]
    got, _ = branching_datum(construct_cover(M))
    assert canonical_rows(got.rows) == M.rows
    assert genus_vector(M) == genus_riemann_hurwitz(M) == tuple(brute_genus(M.rows, p, i) for i in range(1, M.n + 1))
    assert p_rank_vector(M)["p_rank"] == tuple(deuring_shafarevich(M, i) for i in range(1, M.n + 1))
