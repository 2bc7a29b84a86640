"""Set discrete logarithm: all k with T_h^k = S_h (as multisets) for every h.

The solver works with any elements supporting ``*``, ``**``, ``mult_order()``,
equality, hashing and a total order ``<``: finite field elements directly, and
elements of arbitrary black-box groups through :class:`GroupElement`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

from .abelian_engine import (
    NotInSubgroup, UnitGroup, abelian_basis, closure, coset_intersection, cyclic_dlog,
    hidden_subgroup, order_of, power, subgroup_from_elements,
)
from .numtheory import lcm_list, lift_unit, units

__all__ = [
    "FieldMultiset", "SolutionCoset", "GroupElement", "group_multiset",
    "set_discrete_log", "stabilizer_subgroup", "coset_representative", "bruteforce_solutions",
]

BRUTE_GUARD = 10**6


class GroupElement:
    """Adapter giving black-box group elements the multiplicative interface of field elements."""

    __slots__ = ("group", "value", "_order")

    def __init__(self, group, value, order: int | None = None):
        self.group = group
        self.value = value
        self._order = order

    def mult_order(self) -> int:
        if self._order is None:
            self._order = order_of(self.group, self.value)
        return self._order

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(self.group, self.group.mul(self.value, other.value))

    def __pow__(self, n: int) -> "GroupElement":
        return GroupElement(self.group, power(self.group, self.value, n % self.mult_order()))

    def __eq__(self, other) -> bool:
        return isinstance(other, GroupElement) and self.value == other.value

    def __hash__(self) -> int:
        return hash(self.value)

    def __lt__(self, other: "GroupElement") -> bool:
        return self.value < other.value

    def __repr__(self) -> str:
        return f"GroupElement({self.value!r})"


class FieldMultiset:
    """A multiset of nonzero elements of one field (or one multiplicative group)."""

    def __init__(self, elements: Iterable, field: Any = None):
        self.elements = sorted(elements)
        self.field = field if field is not None else (getattr(self.elements[0], "field", None) if self.elements else None)
        for x in self.elements:
            if getattr(x, "field", self.field) != self.field:
                raise ValueError("multiset mixes elements of different fields")
            if not x:
                raise ValueError("multiset elements must be nonzero")

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __eq__(self, other) -> bool:
        return isinstance(other, FieldMultiset) and self.elements == other.elements

    def __repr__(self) -> str:
        return "{" + ", ".join(map(repr, self.elements)) + "}"

    def power(self, k: int) -> "FieldMultiset":
        return FieldMultiset((x ** k for x in self.elements), self.field)

    def orders(self) -> list[int]:
        return [x.mult_order() for x in self.elements]

    def exponent(self) -> int:
        return lcm_list(self.orders()) if self.elements else 1

    def split_by_order(self) -> dict[int, "FieldMultiset"]:
        out: dict[int, list] = {}
        for x in self.elements:
            out.setdefault(x.mult_order(), []).append(x)
        return {o: FieldMultiset(v, self.field) for o, v in out.items()}


def group_multiset(G, elements: Iterable) -> FieldMultiset:
    return FieldMultiset([GroupElement(G, g) for g in elements], field=G)


def _as_multiset(x) -> FieldMultiset:
    return x if isinstance(x, FieldMultiset) else FieldMultiset(x)


@dataclass
class SolutionCoset:
    """The solutions {scale * c mod scale*m : c in rep * <gens> <= Z_m^*}."""

    m: int
    scale: int
    rep: int
    gens: list[int] = field(default_factory=list)

    @property
    def modulus(self) -> int:
        return self.m * self.scale

    @property
    def representative(self) -> int:
        """A positive solution exponent."""
        k = (self.scale * self.rep) % self.modulus
        return k if k else self.modulus

    def subgroup(self) -> set[int]:
        return closure(UnitGroup(self.m), self.gens, cap=BRUTE_GUARD)

    def members(self) -> list[int]:
        """All solutions as residues mod scale * m."""
        U = UnitGroup(self.m)
        return sorted({(self.scale * U.mul(self.rep, h)) % self.modulus for h in self.subgroup()})

    def reduced_members(self) -> list[int]:
        """The coset itself, inside Z_m^*."""
        U = UnitGroup(self.m)
        return sorted({U.mul(self.rep, h) for h in self.subgroup()})

    def __contains__(self, k: int) -> bool:
        if k % self.scale:
            return False
        c = (k // self.scale) % self.m
        return c in set(self.reduced_members())


class _PowGroup:
    """Cyclic-group view of multiplicative elements, for baby-step/giant-step."""

    def __init__(self, one):
        self.identity = one

    def mul(self, a, b):
        return a * b


def _dlog(base, target) -> int | None:
    n = base.mult_order()
    try:
        return cyclic_dlog(_PowGroup(base ** 0), base, target, n)
    except NotInSubgroup:
        return None


def coset_representative(S, T, m: int) -> int | None:
    """Some k in Z_m^* with T^k = S, or None; all elements of S and T share one order dividing m."""
    S, T = _as_multiset(S), _as_multiset(T)
    if len(S) != len(T):
        return None
    if not len(S):
        return 1 % m if m > 1 else 0
    orders = set(S.orders()) | set(T.orders())
    if len(orders) != 1:
        raise ValueError("coset_representative needs elements of a single order")
    (mi,) = orders
    if m % mi:
        raise ValueError(f"element order {mi} does not divide m = {m}")
    x1 = S.elements[0]
    tried = set()
    for y in T.elements:
        if y in tried:
            continue
        tried.add(y)
        alpha = _dlog(y, x1)  # y^alpha = x1
        if alpha is None or math.gcd(alpha, mi) != 1:
            continue
        if T.power(alpha) == S:
            k = lift_unit(alpha % mi, mi, m)
            if T.power(k) != S:
                raise AssertionError("lifted exponent failed verification")
            return k
    return None


def _mu_oracle(T: FieldMultiset, m: int):
    ys = T.elements
    inv = [y ** -1 for y in ys]

    def f(k: int) -> tuple:
        img = T.power(k).elements
        return tuple(a * b for a, b in zip(img, inv))
    return f


def stabilizer_subgroup(T, m: int, backend: str = "brute", rng=None) -> list[int]:
    """Generators of {k in Z_m^* : T^k = T}."""
    T = _as_multiset(T)
    if len(set(T.orders())) > 1:
        raise ValueError("stabilizer_subgroup needs elements of a single order")
    U = UnitGroup(m)
    if backend == "brute":
        if m > BRUTE_GUARD:
            raise ValueError(f"m = {m} exceeds the brute-force guard")
        stab = [k for k in units(m) if T.power(k) == T]
        return subgroup_from_elements(U, stab)
    if backend in ("hsp", "quantum", "exhaustive"):
        basis = abelian_basis(units(m), U)
        f_k = _mu_oracle(T, m)

        def f(vec: tuple) -> tuple:
            return f_k(basis.element(vec))
        hb = "quantum" if backend in ("hsp", "quantum") and math.prod(basis.orders) <= 2**14 else "exhaustive"
        vecs = hidden_subgroup(basis.orders, f, backend=hb, rng=rng)
        return [basis.element(v) for v in vecs]
    raise ValueError(f"unknown backend {backend!r}")


def set_discrete_log(S_list: Sequence, T_list: Sequence, backend: str = "brute", rng=None) -> SolutionCoset | None:
    """The full solution set of T_h^k = S_h (all h), or None when it is empty."""
    if len(S_list) != len(T_list):
        raise ValueError("S and T lists differ in length")
    S_list = [_as_multiset(S) for S in S_list]
    T_list = T_orig = [_as_multiset(T) for T in T_list]
    for S, T in zip(S_list, T_list):
        if S.field is not None and T.field is not None and S.field != T.field:
            raise ValueError("S_h and T_h live in different fields")
    m_S = lcm_list(S.exponent() for S in S_list) if S_list else 1
    m_T = lcm_list(T.exponent() for T in T_list) if T_list else 1
    if m_T % m_S:
        return None
    scale = m_T // m_S
    if scale != 1:
        T_list = [T.power(scale) for T in T_list]
    m = m_S
    U = UnitGroup(m)
    rep, gens = U.identity, list(units(m))
    gens = subgroup_from_elements(U, gens)
    for S, T in zip(S_list, T_list):
        s_parts, t_parts = S.split_by_order(), T.split_by_order()
        for o in sorted(set(s_parts) | set(t_parts)):
            Si = s_parts.get(o, FieldMultiset([], S.field))
            Ti = t_parts.get(o, FieldMultiset([], T.field))
            if len(Si) != len(Ti):
                return None
            k = coset_representative(Si, Ti, m)
            if k is None:
                return None
            stab = stabilizer_subgroup(Ti, m, backend, rng)
            inter = coset_intersection(rep, gens, k, stab, U)
            if inter is None:
                return None
            rep, gens = inter.rep, inter.gens
    sol = SolutionCoset(m, scale, rep, gens)
    for S, T in zip(S_list, T_orig):
        if T.power(sol.representative) != S:
            raise AssertionError("solution failed verification")
    return sol


def bruteforce_solutions(S_list: Sequence, T_list: Sequence) -> list[int]:
    """All k in [0, m_T) with T_h^k = S_h for every h (reference oracle)."""
    S_list = [_as_multiset(S) for S in S_list]
    T_list = [_as_multiset(T) for T in T_list]
    m_T = lcm_list(T.exponent() for T in T_list) if T_list else 1
    return [k for k in range(m_T) if all(T.power(k) == S for S, T in zip(S_list, T_list))]
