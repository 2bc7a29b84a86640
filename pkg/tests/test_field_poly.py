import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from grpiso.field_poly import (
    GF, ExtField, FieldElem, Poly, ext_field, factor_poly, ff_arith, find_irreducible,
    is_irreducible, minimal_subfield_degree, mult_order, poly_from_ints, roots_in_splitting_ext,
)


def elems(F):
    return [FieldElem(F, r) for r in F.elements()]


def test_gf4_alpha_cubed_is_one():
    F = ExtField(2, [1, 1, 1])
    a = FieldElem(F, (0, 1))
    assert a * (a * a) == 1
    assert a.mult_order() == 3


def test_prime_field_examples():
    F = GF(7)
    assert FieldElem(F, 3) * FieldElem(F, 5) == 1
    a = FieldElem(F, 4)
    assert a + FieldElem(F, 0) == a
    assert ff_arith(FieldElem(F, 3), FieldElem(F, 5), "mul") == 1


def test_division_by_zero_and_mixed_fields():
    F = GF(5)
    with pytest.raises(ZeroDivisionError):
        FieldElem(F, 1) / FieldElem(F, 0)
    with pytest.raises(ValueError):
        FieldElem(F, 1) + FieldElem(GF(7), 1)


def test_non_prime_base_rejected():
    with pytest.raises(ValueError):
        GF(4)


@pytest.mark.parametrize("p,d", [(2, 1), (3, 1), (2, 2), (2, 3), (3, 2), (2, 4), (2, 5), (2, 6), (7, 2)])
def test_field_axioms_exhaustive(p, d):
    F = ext_field(p, d)
    xs = elems(F)
    assert len(xs) == p**d <= 64
    zero, one = FieldElem(F, F.zero), FieldElem(F, F.one)
    rng = random.Random(p * 10 + d)
    triples = itertools.product(xs, repeat=3) if len(xs) <= 9 else (
        tuple(rng.choice(xs) for _ in range(3)) for _ in range(3000))
    for a, b, c in triples:
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert (a + b) + c == a + (b + c)
    for a in xs:
        assert a + zero == a and a * one == a
        assert a + (-a) == zero
        if a:
            assert a * (one / a) == one


@pytest.mark.parametrize("p,d", [(2, 2), (2, 3), (3, 2), (5, 2), (2, 4), (3, 3)])
def test_mult_order_divides_group_order(p, d):
    F = ext_field(p, d)
    for a in elems(F):
        if a:
            o = mult_order(a)
            assert (F.q - 1) % o == 0 and a ** o == 1


def test_mult_order_examples():
    assert FieldElem(GF(5), 1).mult_order() == 1
    F8 = ExtField(2, [1, 1, 0, 1])
    a3 = FieldElem(F8, (0, 1, 0))
    assert a3.mult_order() == 7
    with pytest.raises(ValueError):
        FieldElem(F8, F8.zero).mult_order()


def test_find_irreducible_small():
    assert find_irreducible(2, 1).degree == 1
    assert find_irreducible(2, 2).to_ints() == [1, 1, 1]
    assert find_irreducible(2, 3).to_ints() in ([1, 1, 0, 1], [1, 0, 1, 1])
    for p, d in [(3, 4), (5, 3), (7, 2), (2, 8)]:
        f = find_irreducible(p, d, seed=3)
        assert f.degree == d and f.is_monic() and is_irreducible(f)


def _brute_irreducible(f: Poly) -> bool:
    # degree 2 or 3: irreducible iff no root
    F = f.field
    return all(f(a) != F.zero for a in F.elements())


def test_factor_examples():
    f = poly_from_ints(2, [1, 1, 1])
    assert [(g.to_ints(), e) for g, e in factor_poly(f)] == [([1, 1, 1], 1)]
    f = poly_from_ints(3, [1, -2, 1])
    assert [(g.to_ints(), e) for g, e in factor_poly(f)] == [([2, 1], 2)]
    f = poly_from_ints(5, [-1, 0, 1])
    assert sorted((g.to_ints(), e) for g, e in factor_poly(f)) == [([1, 1], 1), ([4, 1], 1)]
    with pytest.raises(ValueError):
        factor_poly(Poly(GF(5), []))


@settings(max_examples=500, deadline=None)
@given(st.sampled_from([2, 3, 5]), st.integers(min_value=1, max_value=8), st.data())
def test_factor_reconstruction(p, deg, data):
    coeffs = data.draw(st.lists(st.integers(0, p - 1), min_size=deg, max_size=deg)) + [1]
    f = poly_from_ints(p, coeffs)
    facs = factor_poly(f)
    prod = Poly.one(GF(p))
    for g, e in facs:
        assert g.is_monic()
        if 2 <= g.degree <= 3:
            assert _brute_irreducible(g)
        assert is_irreducible(g)
        prod = prod * g ** e
    assert prod == f


@pytest.mark.parametrize("p,coeffs,expected_orders", [
    (2, [1, 1, 1], [3, 3]),
    (2, [1, 1, 0, 1], [7, 7, 7]),
])
def test_roots_in_splitting_ext_examples(p, coeffs, expected_orders):
    f = poly_from_ints(p, coeffs)
    roots = roots_in_splitting_ext(f)
    assert sorted(r.mult_order() for r in roots) == expected_orders
    assert len(set(roots)) == f.degree
    # Frobenius orbit: {a, a^p, a^(p^2), ...}
    a = roots[0]
    assert set(roots) == {a ** (p**i) for i in range(f.degree)}


def test_roots_linear():
    f = poly_from_ints(7, [-3, 1])
    assert roots_in_splitting_ext(f) == [FieldElem(GF(7), 3)]
    with pytest.raises(ValueError):
        roots_in_splitting_ext(poly_from_ints(2, [1, 0, 1]))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2), (2, 5)]), st.integers(0, 100))
def test_roots_product_and_frobenius_closure(pd, seed):
    p, d = pd
    f = find_irreducible(p, d, seed=seed)
    roots = roots_in_splitting_ext(f)
    K = roots[0].field
    assert all(minimal_subfield_degree(r) == d for r in roots)
    assert {r ** p for r in roots} == set(roots)
    prod = Poly.one(K)
    for r in roots:
        prod = prod * Poly(K, [(-r).raw, K.one])
    assert prod == f.map_field(K)


def test_minimal_subfield_degree_examples():
    F8 = ext_field(2, 3)
    assert minimal_subfield_degree(FieldElem(F8, F8.one)) == 1
    F4 = ext_field(2, 2)
    a = next(x for x in elems(F4) if x and x.mult_order() == 3)
    assert minimal_subfield_degree(a) == 2
    F16 = ext_field(2, 4)
    for x in elems(F16):
        if x:
            e = minimal_subfield_degree(x)
            assert 4 % e == 0 and (2**e - 1) % x.mult_order() == 0
