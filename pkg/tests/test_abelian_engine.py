import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from grpiso.abelian_engine import (
    CosetDescriptor, CyclicProduct, GroupError, NotInSubgroup, PromiseViolation, UnitGroup,
    abelian_basis, closure, coset_intersection, cyclic_dlog, decompose_over_basis, hidden_subgroup,
    inverse, order_of, power,
)
from grpiso.blackbox import ClassSGroupSpec, build_group, elements


def spec_group(orders, m, action, seed=0):
    return build_group(ClassSGroupSpec(tuple(orders), m, tuple(map(tuple, action)), seed))


def find(G, vec, i):
    return next(g for g in G.all_elements() if G.spec_coords(g) == (tuple(vec), i))


def test_order_examples():
    G = spec_group([12], 1, [[1]], seed=7)
    assert order_of(G, G.identity) == 1
    assert order_of(G, G.gens[0]) == 12
    H = spec_group([3, 3], 2, [[2, 0], [0, 2]], seed=3)
    assert order_of(H, find(H, (1, 0), 0)) == 3


def test_lagrange():
    G = spec_group([3, 3], 4, [[0, 2], [1, 0]], seed=9)
    n = len(elements(G))
    assert n == 36
    for g in elements(G):
        assert n % order_of(G, g) == 0
        assert G.mul(g, inverse(G, g)) == G.identity


def test_inverse_examples():
    G = spec_group([3], 2, [[2]], seed=1)
    assert inverse(G, G.identity) == G.identity
    for g in elements(G):
        if order_of(G, g) == 2:
            assert inverse(G, g) == g
        if order_of(G, g) == 3:
            assert inverse(G, g) == G.mul(g, g)


def test_basis_examples():
    Z6 = CyclicProduct([6])
    assert len(abelian_basis([Z6.identity], Z6)) == 0
    B = abelian_basis([(1,)], Z6)
    assert sorted(B.orders) == [2, 3]
    Z42 = CyclicProduct([4, 2])
    B = abelian_basis([(1, 1), (2, 1)], Z42)
    assert sorted(B.orders) == [2, 4]
    S3 = spec_group([3], 2, [[2]])
    with pytest.raises(GroupError):
        abelian_basis(S3.gens, S3)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.sampled_from([2, 3, 4, 5, 6, 8, 9, 12]), min_size=1, max_size=3), st.data())
def test_basis_spans_and_is_direct(orders, data):
    G = CyclicProduct(orders)
    gens = [tuple(data.draw(st.integers(0, n - 1)) for n in orders) for _ in range(data.draw(st.integers(1, 3)))]
    B = abelian_basis(gens, G)
    span = closure(G, gens)
    assert B.size == len(span)
    assert all(order_of(G, g) == o for g, o in zip(B.elements, B.orders))
    # round trip through the exponent vectors
    for g in span:
        assert B.element(decompose_over_basis(g, B)) == g


def test_decompose_examples():
    G = CyclicProduct([4, 3])
    B = abelian_basis([(1, 0), (0, 1)], G)
    assert decompose_over_basis(G.identity, B) == [0, 0]
    g1 = B.elements[B.orders.index(4)]
    g2 = B.elements[B.orders.index(3)]
    g = G.mul(power(G, g1, 2), g2)
    v = decompose_over_basis(g, B)
    assert v[B.orders.index(4)] == 2 and v[B.orders.index(3)] == 1
    with pytest.raises(NotInSubgroup):
        decompose_over_basis((1, 0), abelian_basis([(0, 1)], G))


def test_decompose_round_trip_1000():
    G = spec_group([4, 2, 9], 1, [[1, 0, 0], [0, 1, 0], [0, 0, 1]], seed=12)
    B = abelian_basis(G.gens, G)
    els = sorted(elements(G))
    rng = random.Random(0)
    for _ in range(1000):
        g = rng.choice(els)
        assert B.element(decompose_over_basis(g, B)) == g


def test_cyclic_dlog():
    U = UnitGroup(101)
    assert cyclic_dlog(U, 2, pow(2, 77, 101)) == 77
    with pytest.raises(NotInSubgroup):
        cyclic_dlog(U, 100, 2)


def _coset(G, x, gens):
    return {G.mul(x, h) for h in closure(G, gens)}


def test_coset_intersection_examples():
    Z12 = CyclicProduct([12])
    res = coset_intersection((1,), [(4,)], (3,), [(6,)], Z12)
    assert res.elements(Z12) == {(9,)}
    assert coset_intersection((1,), [(2,)], (0,), [(2,)], Z12) is None
    res = coset_intersection((5,), [(3,)], (5,), [(3,)], Z12)
    assert (5,) in res.elements(Z12)
    S3 = spec_group([3], 2, [[2]])
    with pytest.raises(GroupError):
        coset_intersection(S3.gens[0], [S3.gens[1]], S3.identity, [], S3)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([8, 15, 21, 24, 35, 63, 100, 105, 240]), st.data())
def test_coset_intersection_units(m, data):
    U = UnitGroup(m)
    els = U.elements()
    pick = st.sampled_from(els)
    g1 = data.draw(st.lists(pick, max_size=2))
    g2 = data.draw(st.lists(pick, max_size=2))
    x, y = data.draw(pick), data.draw(pick)
    expect = _coset(U, x, g1) & _coset(U, y, g2)
    res = coset_intersection(x, g1, y, g2, U)
    assert (res.elements(U) if res else set()) == expect


def test_hidden_subgroup_examples():
    assert hidden_subgroup([6], lambda k: k[0]) == []
    gens = hidden_subgroup([6], lambda k: k[0] % 2)
    assert closure(CyclicProduct([6]), [tuple(g) for g in gens]) == {(0,), (2,), (4,)}
    gens = hidden_subgroup([6], lambda k: k[0] % 2, backend="quantum", rng=random.Random(1))
    assert closure(CyclicProduct([6]), [tuple(g) for g in gens]) == {(0,), (2,), (4,)}
    gens = hidden_subgroup([6], None, backend="structured", hom_images=[[1]], moduli=[2])
    assert closure(CyclicProduct([6]), [tuple(g) for g in gens]) == {(0,), (2,), (4,)}
    with pytest.raises(PromiseViolation):
        # the claimed homomorphism has kernel <2>, but the oracle is injective
        hidden_subgroup([4], lambda k: k[0], backend="structured", hom_images=[[2]], moduli=[4])


@settings(max_examples=40, deadline=None)
@given(st.lists(st.sampled_from([2, 3, 4, 6]), min_size=1, max_size=3), st.data())
def test_hidden_subgroup_constant_exactly_on_cosets(orders, data):
    P = CyclicProduct(orders)
    K = closure(P, [tuple(data.draw(st.integers(0, n - 1)) for n in orders) for _ in range(2)])
    label = {x: min(P.mul(x, k) for k in K) for x in itertools.product(*map(range, orders))}
    for backend in ("exhaustive", "quantum"):
        gens = hidden_subgroup(orders, label.__getitem__, backend=backend, rng=random.Random(0))
        assert closure(P, [tuple(g) for g in gens]) == K


def test_coset_descriptor_elements():
    Z = CyclicProduct([10])
    assert CosetDescriptor((3,), [(5,)]).elements(Z) == {(3,), (8,)}
