import random

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from grpiso.abelian_engine import UnitGroup, closure
from grpiso.blackbox import ClassSGroupSpec, build_group
from grpiso.field_poly import GF, ext_field
from grpiso.numtheory import units
from grpiso.setdlog import (
    FieldMultiset, SolutionCoset, bruteforce_solutions, coset_representative, group_multiset,
    set_discrete_log, stabilizer_subgroup,
)


def ms(F, xs):
    return FieldMultiset([F(x) for x in xs], F)


def test_single_element_examples():
    F = GF(7)
    sol = set_discrete_log([ms(F, [2])], [ms(F, [4])])
    assert sol is not None and 2 in sol.members()
    assert F(4) ** sol.representative == F(2)
    # 2 has order 3, 3 is primitive: no power of 2 reaches 3
    assert set_discrete_log([ms(F, [3])], [ms(F, [2])]) is None


def test_exponent_direction():
    # T = {2}, S = {8} in GF(11): the answer is 3, not its inverse 7 mod 10
    F = GF(11)
    sol = set_discrete_log([ms(F, [8])], [ms(F, [2])])
    assert sol.members() == [3]
    assert coset_representative(ms(F, [8]), ms(F, [2]), 10) == 3


def test_lifted_exponent_needed():
    # 2^k = 4 forces k = 2 mod 3, (-1)^k = -1 forces k odd; the per-element answer 2 is wrong
    F = GF(7)
    S, T = [ms(F, [4]), ms(F, [6])], [ms(F, [2]), ms(F, [6])]
    sol = set_discrete_log(S, T)
    assert sol.members() == [5] == bruteforce_solutions(S, T)


def test_whole_set_permutations():
    F = GF(13)
    T = ms(F, [2, 4, 8])
    S = T.power(5)
    sol = set_discrete_log([S], [T])
    assert sorted(sol.members()) == bruteforce_solutions([S], [T])


def test_stabilizer_examples():
    F = ext_field(2, 2)
    nz = [x for x in (F.elem(r) for r in F.elements()) if x and x.mult_order() == 3]
    assert closure(UnitGroup(3), stabilizer_subgroup(FieldMultiset(nz, F), 3)) == {1, 2}
    w = nz[0]
    single = FieldMultiset([w], F)
    assert closure(UnitGroup(3), stabilizer_subgroup(single, 3)) == {1}
    pair = FieldMultiset([w, w ** 2], F)
    assert closure(UnitGroup(3), stabilizer_subgroup(pair, 3)) == {1, 2}


def test_stabilizer_is_closed_and_exact():
    F = GF(31)
    # 2 has order 5 mod 31
    for xs in ([2], [2, 4], [2, 16], [2, 4, 8, 16], [2, 2, 16, 16]):
        T = ms(F, xs)
        H = closure(UnitGroup(30), stabilizer_subgroup(T, 30))
        assert H == {k for k in units(30) if T.power(k) == T}


@pytest.mark.parametrize("p,xs", [(13, [2, 8]), (17, [3, 5, 6]), (37, [2, 10, 26]), (61, [2, 3])])
def test_hsp_backend_matches_brute(p, xs):
    F = GF(p)
    T = ms(F, xs)
    T = FieldMultiset([x for x in T if x.mult_order() == max(T.orders())], F)
    m = p - 1
    brute = closure(UnitGroup(m), stabilizer_subgroup(T, m))
    hsp = closure(UnitGroup(m), stabilizer_subgroup(T, m, backend="hsp", rng=random.Random(1)))
    assert brute == hsp


def test_solution_coset_membership():
    c = SolutionCoset(m=10, scale=3, rep=3, gens=[9])
    assert c.modulus == 30
    assert c.members() == sorted({9, 21})
    assert 9 in c and 21 in c and 3 not in c and 10 not in c


def test_length_mismatch_is_rejected():
    F = GF(7)
    assert set_discrete_log([ms(F, [2, 2])], [ms(F, [2])]) is None
    with pytest.raises(ValueError):
        set_discrete_log([ms(F, [2])], [])


def test_group_element_adapter():
    G = build_group(ClassSGroupSpec((7,), 3, ((2,),), 5))
    a, y = G.gens
    T = group_multiset(G, [y])
    S = group_multiset(G, [G.mul(y, y)])
    sol = set_discrete_log([S], [T])
    assert sol.members() == [2]
    assert set_discrete_log([group_multiset(G, [a])], [T]) is None


fields = st.sampled_from([(2, 1), (3, 1), (5, 1), (7, 1), (11, 1), (13, 1), (2, 2), (2, 3), (3, 2), (2, 4), (5, 2)])


@st.composite
def instances(draw):
    specs = draw(st.lists(fields, min_size=1, max_size=2))
    Fs = [ext_field(p, d) for p, d in specs]
    T = []
    for F in Fs:
        nz = [F.elem(r) for r in F.elements()]
        nz = [x for x in nz if x]
        T.append(FieldMultiset(draw(st.lists(st.sampled_from(nz), min_size=1, max_size=4)), F))
    k = draw(st.integers(0, 200))
    S = [t.power(k) for t in T]
    if draw(st.booleans()):
        h = draw(st.integers(0, len(S) - 1))
        nz = [x for x in (Fs[h].elem(r) for r in Fs[h].elements()) if x]
        el = list(S[h].elements)
        el[0] = draw(st.sampled_from(nz))
        S[h] = FieldMultiset(el, Fs[h])
    return S, T


@settings(max_examples=150, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(instances())
def test_agrees_with_exhaustive_search(inst):
    S, T = inst
    sol = set_discrete_log(S, T)
    brute = bruteforce_solutions(S, T)
    if sol is None:
        assert brute == []
    else:
        assert sorted(sol.members()) == brute
        for k in brute:
            assert all(t.power(k) == s for s, t in zip(S, T))
