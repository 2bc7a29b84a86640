import random

import pytest

from grpiso.abelian_engine import GroupError, order_of
from grpiso.blackbox import (
    ClassSGroupSpec, InvalidEncoding, SpecError, build_group, commutator, conjugate, derived_subgroup,
    derived_subgroup_gens, elements, format_spec, group_exponent, group_order, load_spec, load_table,
    parse_spec, save_spec, table_group,
)
from grpiso.abelian_engine import closure
from grpiso.iso import group_isomorphism

# an order-4 automorphism of (Z_3)^4: two copies of [[0, 2], [1, 0]]
T4 = ((0, 2, 0, 0), (1, 0, 0, 0), (0, 0, 0, 2), (0, 0, 1, 0))


def spec(orders, m, action, seed=0):
    return ClassSGroupSpec(tuple(orders), m, tuple(map(tuple, action)), seed)


def test_build_examples():
    Z3 = build_group(spec([3], 1, [[1]]))
    assert group_order(Z3) == 3
    S3 = build_group(spec([3], 2, [[2]], seed=5))
    assert group_order(S3) == 6
    assert any(S3.mul(a, b) != S3.mul(b, a) for a in elements(S3) for b in elements(S3))
    G = build_group(spec([3, 3, 3, 3], 4, T4, seed=77))
    assert group_order(G) == 324


def test_trivial_group():
    G = build_group(spec([], 1, []))
    assert group_order(G) == 1 and G.gens == []


@pytest.mark.parametrize("orders,m,action,needle", [
    ([2], 2, [[1]], "gcd"),
    ([3], 2, [[1, 0]], "matrix"),
    ([9, 3], 2, [[8, 1], [0, 2]], "homomorphism"),
    ([9], 2, [[2]], "identity"),
    ([0], 1, [[1]], "positive"),
])
def test_invalid_specs_name_the_constraint(orders, m, action, needle):
    with pytest.raises(SpecError, match=needle):
        build_group(spec(orders, m, action))


def test_semidirect_law_in_transparent_mode():
    s = spec([3, 3, 3, 3], 4, T4)
    G = build_group(s)
    y = G.gens[-1]
    assert G.spec_coords(y) == ((0, 0, 0, 0), 1)
    for j, g in enumerate(G.gens[:-1]):
        vec, i = G.spec_coords(conjugate(G, y, g))
        assert i == 0 and list(vec) == [T4[r][j] for r in range(4)]


def test_group_axioms_sampled():
    G = build_group(spec([3, 3], 4, [[0, 2], [1, 0]], seed=31))
    els = sorted(elements(G))
    rng = random.Random(0)
    for _ in range(1000):
        a, b, c = (rng.choice(els) for _ in range(3))
        assert G.mul(G.mul(a, b), c) == G.mul(a, G.mul(b, c))
    for a in els:
        assert G.mul(a, G.identity) == a == G.mul(G.identity, a)
        inv = next(b for b in els if G.mul(a, b) == G.identity)
        assert G.mul(inv, a) == G.identity


def test_encodings_are_opaque_and_unique():
    s = spec([5], 4, [[2]])
    G, H = build_group(s), build_group(s.with_seed(99))
    assert G.nbytes == H.nbytes == 2
    assert len(set(G.all_elements())) == 20
    assert {G.internal(g) for g in G.all_elements()} == set(range(20))
    assert G.gens != H.gens or G.identity != H.identity
    assert not H.is_element(b"\xff\xff")
    with pytest.raises(InvalidEncoding):
        H.mul(b"\x00", H.identity)


def test_scrambled_and_transparent_builds_are_isomorphic():
    s = spec([3, 3, 3, 3], 4, T4)
    res = group_isomorphism(build_group(s), build_group(s.with_seed(4242)))
    assert res.isomorphic


def test_commutator_examples():
    S3 = build_group(spec([3], 2, [[2]], seed=2))
    a, y = S3.gens
    assert commutator(S3, a, a) == S3.identity
    assert commutator(S3, a, S3.mul(a, a)) == S3.identity
    c = commutator(S3, a, y)
    assert c != S3.identity and order_of(S3, c) == 3


def test_derived_subgroup_examples():
    Z = build_group(spec([4, 3], 1, [[1, 0], [0, 1]]))
    assert derived_subgroup_gens(Z) == []
    S3 = build_group(spec([3], 2, [[2]], seed=8))
    gens, elems = derived_subgroup(S3)
    assert len(elems) == 3 and closure(S3, gens) == elems
    # T - I invertible mod 3, so G' = A
    G = build_group(spec([3, 3, 3, 3], 4, T4, seed=6))
    gens, elems = derived_subgroup(G)
    assert len(elems) == 81
    for g in G.gens:
        assert all(conjugate(G, g, d) in elems for d in gens)


def test_group_exponent():
    G = build_group(spec([3], 4, [[2]]))
    assert group_exponent(G) == 12


def test_spec_file_round_trip(tmp_path):
    s = spec([3, 3, 3, 3], 4, T4, seed=12345)
    path = tmp_path / "g.spec"
    save_spec(s, path)
    assert load_spec(path) == s
    assert parse_spec(format_spec(s)) == s
    assert parse_spec("abelian = 5\nm = 1\n").action == ((1,),)
    with pytest.raises(SpecError):
        parse_spec("abelian 5")


def _z2z3_table():
    # Z_6 as Z_2 x Z_3 with index 3a + b
    return [[3 * ((a1 + a2) % 2) + (b1 + b2) % 3 for a2 in range(2) for b2 in range(3)]
            for a1 in range(2) for b1 in range(3)]


def test_table_groups(tmp_path):
    t = _z2z3_table()
    path = tmp_path / "z6.tbl"
    path.write_text("6\n" + "\n".join(" ".join(map(str, r)) for r in t) + "\n")
    G = load_table(path, scramble_seed=3)
    assert group_order(G) == 6 and group_exponent(G) == 6
    with pytest.raises(SpecError):
        table_group([[0, 1], [0, 1]])
    with pytest.raises(SpecError):
        table_group([[0, 1, 2], [1, 2, 0]])


def test_table_group_rejects_non_associative():
    # a Latin square with identity 0 that is not a group (order 5 loop)
    t = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    with pytest.raises(SpecError):
        table_group(t)


def test_enumeration_respects_order_cap(monkeypatch):
    G = build_group(spec([3, 3, 3, 3], 4, T4))
    monkeypatch.setenv("GRPISO_MAX_GROUP_ORDER", "50")
    with pytest.raises(GroupError):
        derived_subgroup(G)
