import pytest
from hypothesis import given, settings, strategies as st

from asw_moduli import GF, rational_function_field, frobenius_inverse, extension_containing
from asw_moduli.errors import DescriptorMismatch, FieldError, UnsupportedOperation
from asw_moduli.fields import field_arith, minimal_splitting_degree, pth_root
from asw_moduli.parse import parse_field_element, parse_field_name

FIELDS = [GF(2), GF(3), GF(5), GF(2, 2), GF(3, 2), GF(2, 3), GF(5, 2)]


def test_spec_arith_examples():
    F2 = GF(2)
    assert field_arith(F2(1), F2(1), "add") == F2(0)
    T = rational_function_field(F2, "t")
    assert field_arith(T.gen, T.gen, "div") == T(1)
    F4 = GF(2, 2)
    g = F4.gen
    assert field_arith(g, g, "mul") == g + 1
    assert str(g * g) == "g+1"


def test_frobenius_inverse_examples():
    assert frobenius_inverse(GF(2)(1)) == GF(2)(1)
    F4 = GF(2, 2)
    g = F4.gen
    assert frobenius_inverse(g) == g * g
    assert frobenius_inverse(F4(0)) == F4(0)
    with pytest.raises(UnsupportedOperation):
        frobenius_inverse(rational_function_field(GF(3)).gen)


def test_mismatched_fields():
    with pytest.raises(DescriptorMismatch):
        field_arith(GF(2)(1), GF(3)(1), "add")


@pytest.mark.parametrize("F", FIELDS, ids=str)
def test_field_axioms_exhaustive(F):
    els = list(F.elements())
    assert len(els) == F.order
    one, zero = F.one, F.zero
    for a in els:
        assert F.add(a, F.neg(a)) == zero
        assert F.frob(F.pth_root(a)) == a
        if a != zero:
            assert F.mul(a, F.inv(a)) == one
    # Frobenius is additive and x^q = x
    for a in els[:16]:
        assert F.pow(a, F.order) == a
        for b in els[:16]:
            assert F.frob(F.add(a, b)) == F.add(F.frob(a), F.frob(b))


@settings(max_examples=200)
@given(st.sampled_from(FIELDS), st.data())
def test_field_ring_laws(F, data):
    a, b, c = (data.draw(st.integers(0, F.order - 1)) for _ in range(3))
    els = list(F.elements())
    a, b, c = els[a], els[b], els[c]
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))


@settings(max_examples=200)
@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(1, 4), st.integers(1, 4))
def test_parametric_field(a, b, c, d):
    T = rational_function_field(GF(5), "t")
    t = T.gen
    x = (t ** 2 * a + b) / (t ** c + d)
    y = (t + 1) ** 2
    assert (x * y) / y == x
    assert x - x == T(0)
    # p-th powers have p-th roots, others do not
    assert pth_root(x ** 5) == x


def test_parametric_pth_root_missing():
    T = rational_function_field(GF(2), "t")
    with pytest.raises(FieldError):
        pth_root(T.gen)


def test_specialize_parametric():
    T = rational_function_field(GF(5), "t")
    t = T.gen
    v = ((t + 1) / (t + 2)).raw
    assert T.specialize(v, GF(5)(0).raw) == GF(5).div(1, 2)


def test_extension_containing_embeds():
    F4 = GF(2, 2)
    big, emb = extension_containing(F4, 256)
    assert big.order >= 256
    g = F4.gen.raw
    # embedding is a ring map
    assert emb(F4.mul(g, g)) == big.mul(emb(g), emb(g))
    assert emb(F4.add(g, F4.one)) == big.add(emb(g), big.one)


def test_minimal_splitting_degree():
    F3 = GF(3)
    assert minimal_splitting_degree(F3, (1, 0, 1)) == 2       # x^2 + 1
    assert minimal_splitting_degree(F3, (2, 1)) == 1


@pytest.mark.parametrize("name,order", [("F5", 5), ("F4", 4), ("GF(9)", 9), ("F9[g^2+1]", 9), ("F2(t)", None)])
def test_field_names(name, order):
    K = parse_field_name(name)
    assert K.order == order if order else K.parametric


@pytest.mark.parametrize("F", FIELDS + [rational_function_field(GF(3)), rational_function_field(GF(2, 2))], ids=str)
def test_format_parse_round_trip(F):
    import random
    rng = random.Random(1)
    for _ in range(40):
        a = F.random_element(rng)
        assert parse_field_element(F.format(a), F).raw == a
