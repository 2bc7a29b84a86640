import itertools
import math
import random

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from grpiso.abelian_engine import closure, order_of, power
from grpiso.blackbox import ClassSGroupSpec, build_group, derived_subgroup, group_order, table_group
from grpiso.corpus import random_spec
from grpiso.decompose import (
    DecompositionFailure, StandardDecomposition, gamma_bruteforce, standard_decompose,
    verify_standard_decomposition, zw_membership_test,
)


def spec(orders, m, action, seed=0):
    return ClassSGroupSpec(tuple(orders), m, tuple(map(tuple, action)), seed)


def quaternion_table():
    # units of the quaternion group as (sign, axis) with axis 0=1, 1=i, 2=j, 3=k
    els = [(s, a) for s in (1, -1) for a in range(4)]
    prod = {(1, 1): (-1, 0), (2, 2): (-1, 0), (3, 3): (-1, 0), (1, 2): (1, 3), (2, 3): (1, 1),
            (3, 1): (1, 2), (2, 1): (-1, 3), (3, 2): (-1, 1), (1, 3): (-1, 2)}

    def mul(x, y):
        (s, a), (t, b) = x, y
        if a == 0 or b == 0:
            return (s * t, a + b)
        u, c = prod[(a, b)]
        return (s * t * u, c)
    return [[els.index(mul(x, y)) for y in els] for x in els]


def test_abelian_group_has_trivial_cyclic_part():
    G = build_group(spec([4, 3], 1, [[1, 0], [0, 1]]))
    sd = standard_decompose(G)
    assert sd.m == 1 and sd.A_order(G) == 12


def test_s3():
    G = build_group(spec([3], 2, [[2]], seed=3))
    sd = standard_decompose(G)
    assert sd.m == 2 and sd.A_order(G) == 3
    assert not commutes_all(G, sd.v, sd.A_gens)


def test_z5_by_z4():
    G = build_group(spec([5], 4, [[2]], seed=9))
    sd = standard_decompose(G)
    assert (sd.A_order(G), sd.m) == (5, 4)


def commutes_all(G, g, others):
    return all(G.mul(g, h) == G.mul(h, g) for h in others)


def test_verify_rejects_bad_pairs():
    G = build_group(spec([3], 2, [[2]], seed=3))
    sd = standard_decompose(G)
    assert verify_standard_decomposition(G, sd)
    assert not verify_standard_decomposition(G, StandardDecomposition(sd.A_gens, G.identity, 1))
    # v of order 3 overlaps A
    assert not verify_standard_decomposition(G, StandardDecomposition(sd.A_gens, sd.A_gens[0], 3))


def test_zw_membership_examples():
    G = build_group(spec([3], 2, [[2]]))
    a, y = G.gens
    assert zw_membership_test(a, y, G)  # <a> is normal
    assert not zw_membership_test(y, a, G)  # a y a^-1 is another involution
    assert zw_membership_test(y, y, G)


def test_quaternion_group_is_rejected():
    G = table_group(quaternion_table(), scramble_seed=1)
    assert gamma_bruteforce(G) is None
    with pytest.raises(DecompositionFailure):
        standard_decompose(G)


def test_v_fragments_lie_in_derived_coset_of_cyclic_part():
    # every element placed in V has the form a * y^alpha with a in G'
    rng = random.Random(5)
    for _ in range(10):
        s = random_spec([3, 3, 3], 4, rng)
        G = build_group(s)
        sd = standard_decompose(G)
        _, D = derived_subgroup(G)
        y = G.gens[-1]
        for w in sd.state.V:
            assert any(G.mul(w, power(G, y, -al)) in D for al in range(s.m))


def test_deterministic():
    G = build_group(spec([3, 3, 3, 3], 4, [[0, 2, 0, 0], [1, 0, 0, 0], [0, 0, 0, 2], [0, 0, 1, 0]], 11))
    a, b = standard_decompose(G), standard_decompose(G)
    assert a.A_gens == b.A_gens and a.v == b.v


shapes = st.sampled_from([([3], 2), ([3], 4), ([5], 4), ([7], 3), ([7], 6), ([3, 3], 4), ([3, 3], 8),
                          ([9], 2), ([9, 3], 2), ([2, 2], 3), ([5, 5], 3), ([4], 3), ([3], 10)])


@settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(shapes, st.integers(0, 10**6), st.integers(0, 10**6))
def test_decomposition_is_valid_and_minimal(shape, s1, s2):
    orders, m = shape
    G = build_group(random_spec(orders, m, random.Random(s1), scramble_seed=s2))
    sd = standard_decompose(G)
    assert verify_standard_decomposition(G, sd)
    assert sd.m == gamma_bruteforce(G)
    assert math.gcd(sd.A_order(G), sd.m) == 1
    assert sd.A_order(G) * order_of(G, sd.v) == group_order(G)
    A = sd.A_elements(G)
    assert all(G.mul(x, y) == G.mul(y, x) for x, y in itertools.combinations(sorted(A)[:30], 2))
    assert len(closure(G, list(sd.A_gens) + [sd.v])) == group_order(G)
