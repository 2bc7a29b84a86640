"""Classical stand-ins for the abelian-group oracles: order finding, bases,
constructive membership, coset intersection and the abelian hidden subgroup problem.

Every function works on any *group object* exposing ``identity`` and
``mul(a, b)`` over hashable elements (black-box groups, :class:`UnitGroup`,
:class:`CyclicProduct`, ...).
"""
from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Sequence

from . import intlin
from .numtheory import factorint, lcm_list

__all__ = [
    "GroupError", "NotInSubgroup", "PromiseViolation", "max_group_order",
    "power", "order_of", "inverse", "closure", "commutes", "cyclic_dlog",
    "AbelianBasis", "abelian_basis", "decompose_over_basis",
    "CosetDescriptor", "coset_intersection", "hidden_subgroup", "subgroup_from_elements",
    "UnitGroup", "CyclicProduct",
]

ORDER_CAP = 10**6
EXHAUSTIVE_CAP = 10**6
QUANTUM_CAP = 2**14


class GroupError(Exception):
    """Raised when an oracle-layer precondition fails (guards, non-commuting input, ...)."""


class NotInSubgroup(GroupError):
    pass


class PromiseViolation(GroupError):
    pass


def max_group_order() -> int:
    return int(os.environ.get("GRPISO_MAX_GROUP_ORDER", 10**5))


# -- basic element operations -------------------------------------------------


def power(G, g, n: int):
    """g^n for n >= 0 by square-and-multiply."""
    if n < 0:
        return power(G, inverse(G, g), -n)
    result = G.identity
    while n:
        if n & 1:
            result = G.mul(result, g)
        g = G.mul(g, g)
        n >>= 1
    return result


def order_of(G, g, cap: int = ORDER_CAP) -> int:
    """Smallest k >= 1 with g^k = e (direct powering, then baby-step/giant-step up to ``cap``)."""
    e = G.identity
    cur = g
    for k in range(1, 65):
        if cur == e:
            return k
        cur = G.mul(cur, g)
    s = math.isqrt(cap) + 1
    baby: dict[Any, int] = {}
    cur = g
    for j in range(1, s + 1):
        if cur == e:
            return j
        baby.setdefault(cur, j)
        cur = G.mul(cur, g)
    giant = power(G, g, s)
    cur = giant
    i = 1
    # first i with g^(i*s) = g^j (j <= s) gives the order i*s - j
    while i * s <= cap + s:
        j = baby.get(cur)
        if j is not None and i * s - j > 0:
            return i * s - j
        if cur == e:
            return i * s
        cur = G.mul(cur, giant)
        i += 1
    raise GroupError(f"element order exceeds the cap {cap}")


def inverse(G, g):
    """g^(|g| - 1); no inverse oracle is needed."""
    if hasattr(G, "inverse"):
        return G.inverse(g)
    return power(G, g, order_of(G, g) - 1)


def cyclic_dlog(G, base, target, order: int | None = None) -> int:
    """k in [0, |base|) with base^k = target (baby-step/giant-step, re-verified).

    Raises NotInSubgroup when target is not a power of base.
    """
    n = order if order is not None else order_of(G, base)
    s = math.isqrt(n - 1) + 1 if n > 1 else 1
    baby: dict[Any, int] = {}
    cur = G.identity
    for j in range(s):
        baby.setdefault(cur, j)
        cur = G.mul(cur, base)
    giant_inv = inverse(G, power(G, base, s))
    cur = target
    for i in range(s + 1):
        j = baby.get(cur)
        if j is not None:
            k = (i * s + j) % n
            if power(G, base, k) == target:
                return k
            break
        cur = G.mul(cur, giant_inv)
    raise NotInSubgroup("target is not in the cyclic subgroup")


def commutes(G, a, b) -> bool:
    return G.mul(a, b) == G.mul(b, a)


def closure(G, gens: Sequence, cap: int | None = None) -> set:
    """All elements of <gens> by breadth-first multiplication."""
    cap = cap or max_group_order()
    seen = {G.identity}
    frontier = [G.identity]
    gens = [g for g in gens if g != G.identity]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = G.mul(a, g)
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
                    if len(seen) > cap:
                        raise GroupError(f"subgroup closure exceeds the guard {cap}")
        frontier = nxt
    return seen


# -- bases of abelian subgroups ----------------------------------------------


@dataclass
class AbelianBasis:
    """Elements g_i of prime-power order with <g_1> x ... x <g_s> = the subgroup."""

    group: Any
    elements: list
    orders: list[int]
    _table: dict | None = field(default=None, repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def size(self) -> int:
        return math.prod(self.orders)

    def types(self) -> list[tuple[int, int]]:
        """(p, f) with |g_i| = p^f for each basis element."""
        out = []
        for o in self.orders:
            ((p, f),) = factorint(o).items()
            out.append((p, f))
        return out

    def element(self, exps: Sequence[int]):
        G = self.group
        g = G.identity
        for b, u, o in zip(self.elements, exps, self.orders):
            g = G.mul(g, power(G, b, u % o))
        return g

    def table(self) -> dict:
        if self._table is None:
            if self.size > max(max_group_order(), EXHAUSTIVE_CAP):
                raise GroupError("subgroup too large to tabulate")
            G = self.group
            tab = {G.identity: (0,) * len(self.elements)}
            for i, (b, o) in enumerate(zip(self.elements, self.orders)):
                new = {}
                for g, v in tab.items():
                    cur = g
                    for j in range(o):
                        w = list(v)
                        w[i] = j
                        new[cur] = tuple(w)
                        cur = G.mul(cur, b)
                tab = new
            self._table = tab
        return self._table

    def contains(self, g) -> bool:
        return g in self.table()


def abelian_basis(gens: Sequence, G) -> AbelianBasis:
    """A basis (prime-power orders) of the abelian subgroup <gens>."""
    gens = list(dict.fromkeys(g for g in gens if g != G.identity))
    for a, b in itertools.combinations(gens, 2):
        if not commutes(G, a, b):
            raise GroupError("generators do not commute")
    n = len(gens)
    if n == 0:
        return AbelianBasis(G, [], [])
    cap = max(max_group_order(), EXHAUSTIVE_CAP)
    # incremental enumeration: table of element -> exponent vector over gens
    table = {G.identity: (0,) * n}
    relations = []
    for i, g in enumerate(gens):
        c, cur = 1, g
        while cur not in table:
            cur = G.mul(cur, g)
            c += 1
        rel = [-x for x in table[cur]]
        rel[i] += c
        relations.append(rel)
        if c > 1:
            new = dict(table)
            step = g
            for j in range(1, c):
                for h, v in table.items():
                    w = list(v)
                    w[i] = j
                    new[G.mul(h, step)] = tuple(w)
                step = G.mul(step, g)
            table = new
            if len(table) > cap:
                raise GroupError(f"subgroup exceeds the guard {cap}")
    _, D, _, Vinv = intlin.smith_normal_form(relations)
    gen_orders = [order_of(G, g) for g in gens]
    elements, orders = [], []
    for j in range(n):
        d = abs(D[j][j])
        if d <= 1:
            continue
        h = G.identity
        for i in range(n):
            h = G.mul(h, power(G, gens[i], Vinv[j][i] % gen_orders[i]))
        for p, e in factorint(d).items():
            elements.append(power(G, h, d // p**e))
            orders.append(p**e)
    ordering = sorted(range(len(orders)), key=lambda k: (factorint(orders[k]).popitem()[0], orders[k]))
    basis = AbelianBasis(G, [elements[k] for k in ordering], [orders[k] for k in ordering])
    assert basis.size == len(table), "basis does not span the subgroup"
    return basis


def decompose_over_basis(g, basis: AbelianBasis) -> list[int]:
    """Exponents (u_i) with g = prod g_i^{u_i}, 0 <= u_i < |g_i|; NotInSubgroup otherwise."""
    v = basis.table().get(g)
    if v is None:
        raise NotInSubgroup("element is not in the subgroup spanned by the basis")
    if basis.element(v) != g:
        raise NotInSubgroup("decomposition failed re-verification")
    return list(v)


def subgroup_from_elements(G, elements) -> list:
    """A small generating set for the subgroup consisting of ``elements``."""
    gens: list = []
    span = {G.identity}
    for x in elements:
        if x not in span:
            gens.append(x)
            span = closure(G, gens)
    return gens


# -- coset intersection ----------------------------------------------------------


@dataclass
class CosetDescriptor:
    rep: Any
    gens: list

    def elements(self, G) -> set:
        return {G.mul(self.rep, h) for h in closure(G, self.gens)}


def _vec(basis: AbelianBasis, g) -> list[int]:
    return decompose_over_basis(g, basis)


def coset_intersection(x, gens1: Sequence, y, gens2: Sequence, G) -> CosetDescriptor | None:
    """x<gens1> ∩ y<gens2> in an abelian group, as rep * <gens>, or None when empty."""
    for a, b in itertools.combinations(list(gens1) + list(gens2) + [x, y], 2):
        if not commutes(G, a, b):
            raise GroupError("coset intersection needs an abelian ambient group")
    B1 = abelian_basis(gens1, G)
    B2 = abelian_basis(gens2, G)
    w = G.mul(x, inverse(G, y))
    ambient = abelian_basis(list(B1.elements) + list(B2.elements) + [w], G)
    mod = ambient.orders
    a_imgs = [_vec(ambient, g) for g in B1.elements]
    b_imgs = [_vec(ambient, g) for g in B2.elements]
    w_inv = [(-c) % o for c, o in zip(_vec(ambient, w), mod)]
    s = len(B1)

    # Q1 = {(a, b, c) : alpha^a beta^b (x y^-1)^-c = e}; need some element with c = 1
    orders1 = B1.orders + B2.orders + [order_of(G, w)]
    f1_imgs = a_imgs + b_imgs + [w_inv]
    q1 = hidden_subgroup(orders1, _hom_oracle(f1_imgs, mod), hom_images=f1_imgs, moduli=mod)
    lattice = q1 + [[o if i == j else 0 for i in range(len(orders1))] for j, o in enumerate(orders1)]
    acc = [0] * len(orders1)
    for v in lattice:
        g0, p, q = _xgcd(acc[-1], v[-1])
        acc = [p * a + q * b for a, b in zip(acc, v)]
    if acc[-1] != 1:
        return None
    rep = G.mul(x, inverse(G, B1.element(acc[:s])))

    # Q2 = {(a, b) : alpha^a beta^b = e}; projections onto the alpha part generate the intersection
    f2_imgs = a_imgs + b_imgs
    q2 = hidden_subgroup(B1.orders + B2.orders, _hom_oracle(f2_imgs, mod), hom_images=f2_imgs, moduli=mod)
    inter = [B1.element(v[:s]) for v in q2]
    inter = list(dict.fromkeys(h for h in inter if h != G.identity))
    return CosetDescriptor(rep, inter)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def _hom_oracle(images: Sequence[Sequence[int]], moduli: Sequence[int]) -> Callable:
    def f(k: Sequence[int]) -> tuple[int, ...]:
        return tuple(sum(c * img[i] for c, img in zip(k, images)) % m for i, m in enumerate(moduli))
    return f


# -- abelian hidden subgroup problem ----------------------------------------------


def hidden_subgroup(orders: Sequence[int], f: Callable[[tuple], Hashable], *,
                    backend: str = "auto", hom_images=None, moduli=None,
                    rng=None, verify: bool = True) -> list[list[int]]:
    """Generators of the subgroup K of Z_{n_1} x ... x Z_{n_t} hidden by f.

    Backends: ``structured`` (f is a homomorphism given by ``hom_images`` into
    prod Z_{moduli}, possibly composed with a shift; kernel by integer
    linear algebra), ``exhaustive`` (enumerate the domain) and ``quantum``
    (state-vector simulation, tiny domains only).
    """
    orders = list(orders)
    size = math.prod(orders)
    if backend == "auto":
        backend = "structured" if hom_images is not None else "exhaustive"
    if backend == "structured":
        if hom_images is None or moduli is None:
            raise ValueError("structured backend needs hom_images and moduli")
        if f is None:
            f = _hom_oracle(hom_images, moduli)
        gens = intlin.kernel_mod(hom_images, moduli, orders) if orders else []
    elif backend == "exhaustive":
        if size > EXHAUSTIVE_CAP:
            raise GroupError(f"domain of size {size} exceeds the exhaustive guard")
        zero = tuple(0 for _ in orders)
        f0 = f(zero)
        members = [k for k in itertools.product(*map(range, orders)) if f(k) == f0]
        gens = [list(g) for g in subgroup_from_elements(CyclicProduct(orders), members)]
    elif backend == "quantum":
        from .quantum_sim import hsp_recover
        gens = hsp_recover(orders, f, rng=rng)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    gens = [list(g) for g in gens if any(g)]
    if verify and orders:
        zero = tuple(0 for _ in orders)
        f0 = f(zero)
        for g in gens:
            if f(tuple(g)) != f0:
                raise PromiseViolation("oracle is not constant on the recovered subgroup")
    return gens


# -- concrete helper groups ---------------------------------------------------------


class UnitGroup:
    """Z_m^* under multiplication; Z_1^* is the trivial group {0}."""

    def __init__(self, m: int):
        self.m = m
        self.identity = 1 % m

    def mul(self, a: int, b: int) -> int:
        return a * b % self.m

    def inverse(self, a: int) -> int:
        return pow(a, -1, self.m) if self.m > 1 else 0

    def elements(self) -> list[int]:
        if self.m == 1:
            return [0]
        return [k for k in range(1, self.m) if math.gcd(k, self.m) == 1]

    def __repr__(self) -> str:
        return f"UnitGroup({self.m})"


class CyclicProduct:
    """Z_{n_1} x ... x Z_{n_t}, written multiplicatively over tuples."""

    def __init__(self, orders: Sequence[int]):
        self.orders = tuple(orders)
        self.identity = tuple(0 for _ in orders)

    def mul(self, a, b):
        return tuple((x + y) % n for x, y, n in zip(a, b, self.orders))

    def inverse(self, a):
        return tuple(-x % n for x, n in zip(a, self.orders))

    @property
    def order(self) -> int:
        return math.prod(self.orders)

    def elements(self):
        return itertools.product(*map(range, self.orders))

    def exponent(self) -> int:
        return lcm_list(self.orders)
