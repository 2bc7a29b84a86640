"""Standard decompositions (A, <v>) of groups in class S, with minimal |v|.

The procedure sorts prime-power parts of the generators into a set U spanning
the abelian normal part and a set V of cyclic-part fragments, then glues V into
a single element v. Everything runs through the black-box interface.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Any

from .abelian_engine import (
    GroupError, NotInSubgroup, closure, commutes, cyclic_dlog, order_of, power,
)
from .blackbox import conjugate, derived_subgroup, elements, group_order
from .numtheory import divisors, factorint, lcm_list

__all__ = [
    "DecompositionFailure", "DecompositionState", "StandardDecomposition",
    "standard_decompose", "verify_standard_decomposition", "zw_membership_test",
    "gamma_bruteforce",
]


class DecompositionFailure(GroupError):
    """The input is not in class S, or the procedure produced an unverifiable pair."""


@dataclass
class DecompositionState:
    U: list = field(default_factory=list)
    V: list = field(default_factory=list)
    Sigma: list = field(default_factory=list)
    kappa: int = 1
    kappa_factors: dict = field(default_factory=dict)
    Gamma: dict = field(default_factory=dict)


@dataclass
class StandardDecomposition:
    A_gens: list
    v: Any
    m: int
    state: DecompositionState | None = None
    confident: bool = True

    def A_elements(self, G) -> set:
        return closure(G, self.A_gens)

    def A_order(self, G) -> int:
        return len(self.A_elements(G))


def zw_membership_test(w, z, G) -> bool:
    """Whether z w z^-1 lies in <w> (discrete log in <w>, then re-verified)."""
    target = conjugate(G, z, w)
    try:
        k = cyclic_dlog(G, w, target)
    except NotInSubgroup:
        return False
    return power(G, w, k) == target


def _commutes_with_all(G, g, others) -> bool:
    return all(commutes(G, g, h) for h in others)


def standard_decompose(G, verify: bool = True, seed: int = 0) -> StandardDecomposition:
    """Standard decomposition of a black-box group in class S.

    ``seed`` is accepted for interface stability; every step here is exact.
    """
    gens = list(G.gens)
    dgens, delems = derived_subgroup(G)
    d_order = len(delems)

    kappa = lcm_list(order_of(G, g) for g in gens) if gens else 1
    kf = factorint(kappa) if kappa > 1 else {}
    st = DecompositionState(U=list(dgens), kappa=kappa, kappa_factors=kf)

    for p, e in sorted(kf.items()):
        gamma = [power(G, g, kappa // p**e) for g in gens]
        st.Gamma[p] = gamma
        centralizes = all(_commutes_with_all(G, x, dgens) for x in gamma)
        if centralizes and math.gcd(p, d_order) != 1:
            st.U.extend(gamma)
        elif centralizes:
            target = len(closure(G, gamma + dgens))
            pick = next((x for x in gamma if len(closure(G, [x] + dgens)) == target), None)
            if pick is None:
                st.U.extend(gamma)
            else:
                st.Sigma.append(pick)
        else:
            orders = [order_of(G, x) for x in gamma]
            st.V.append(gamma[orders.index(max(orders))])

    placed: set = set()
    for w in st.Sigma:
        z = next((z for z in st.Sigma if not commutes(G, w, z)), None)
        if z is not None:
            (st.U if zw_membership_test(w, z, G) else st.V).append(w)
            placed.add(w)
    for w in st.Sigma:
        if w in placed:
            continue
        (st.U if _commutes_with_all(G, w, st.U) else st.V).append(w)

    b = math.prod(order_of(G, g) for g in st.V)
    z = G.identity
    for g in st.V:
        z = G.mul(z, g)
    v = power(G, z, order_of(G, z) // b) if b > 0 else z
    A_gens = list(dict.fromkeys(g for g in st.U if g != G.identity))
    sd = StandardDecomposition(A_gens, v, order_of(G, v), st)
    if verify and not verify_standard_decomposition(G, sd):
        raise DecompositionFailure("not in class S, or the procedure failed verification")
    return sd


def verify_standard_decomposition(G, sd: StandardDecomposition) -> bool:
    """A abelian and normal, gcd(|A|, |v|) = 1, A meets <v> trivially and |A||v| = |G|."""
    A_gens = list(sd.A_gens)
    for a, b in itertools.combinations(A_gens, 2):
        if not commutes(G, a, b):
            return False
    try:
        A = closure(G, A_gens)
    except GroupError:
        return False
    for g in G.gens:
        if any(conjugate(G, g, a) not in A for a in A_gens):
            return False
    mv = order_of(G, sd.v)
    if mv != sd.m or math.gcd(len(A), mv) != 1:
        return False
    cyc = closure(G, [sd.v])
    if len(cyc & A) != 1:
        return False
    return len(A) * mv == group_order(G)


def gamma_bruteforce(G) -> int | None:
    """Minimal m with G = A x| Z_m, gcd(|A|, m) = 1, A abelian; None if G is not in class S.

    The candidate A for a given m is forced: it is the set of elements whose
    order divides |G|/m.
    """
    elems = list(elements(G))
    n = len(elems)
    orders = {g: order_of(G, g) for g in elems}
    for m in divisors(n):
        a = n // m
        if math.gcd(a, m) != 1:
            continue
        S = [g for g in elems if a % orders[g] == 0]
        if len(S) != a or not any(o == m for o in orders.values()):
            continue
        Sset = set(S)
        if all(G.mul(x, y) in Sset for x in S for y in S) and \
                all(commutes(G, x, y) for x, y in itertools.combinations(S, 2)):
            return m
    return None
