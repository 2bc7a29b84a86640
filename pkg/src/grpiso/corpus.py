"""Random class-S specs and random instances for the solvers.

An action of order dividing m on a homocyclic block (Z_{p^f})^r is drawn by
choosing a multiset of irreducible factors of x^m - 1 over GF(p) of total
degree r, taking the block-diagonal of their companions, conjugating by a
random invertible matrix, and lifting to Z_{p^f} with the p'-part of the lift.
"""
from __future__ import annotations

import math
import random
from functools import lru_cache
from typing import Sequence

from .blackbox import ClassSGroupSpec, SpecError
from .field_poly import GF, Poly, factor_poly, poly_from_ints
from .matrix_forms import block_diag, companion, random_invertible
from .numtheory import factorint

__all__ = [
    "prime_power_orders", "factor_types", "random_action", "random_spec",
    "census_specs", "spec_with_action_type", "isomorphic_copy",
]


def prime_power_orders(orders: Sequence[int]) -> list[int]:
    """Split each cyclic order into prime powers (Z_12 = Z_4 x Z_3), sorted by (p, p^f)."""
    out = []
    for n in orders:
        if n > 1:
            out += [p**e for p, e in factorint(n).items()]
    return sorted(out, key=lambda q: (min(factorint(q)), q))


@lru_cache(maxsize=None)
def _xm_factors(p: int, m: int) -> tuple[Poly, ...]:
    f = poly_from_ints(p, [-1] + [0] * (m - 1) + [1])
    return tuple(g for g, _ in factor_poly(f))


def factor_types(p: int, m: int, r: int) -> list[tuple[Poly, ...]]:
    """All multisets of irreducible factors of x^m - 1 over GF(p) with total degree r."""
    facs = sorted(_xm_factors(p, m), key=lambda g: (g.degree, g.to_ints()))
    out: list[tuple[Poly, ...]] = []

    def rec(start: int, left: int, acc: list):
        if left == 0:
            out.append(tuple(acc))
            return
        for i in range(start, len(facs)):
            if facs[i].degree <= left:
                rec(i, left - facs[i].degree, acc + [facs[i]])
    rec(0, r, [])
    return out


def _lift_p_prime(L: list[list[int]], q: int, p: int, f: int, m: int) -> list[list[int]]:
    """The p'-part of an integer matrix over Z_q (q = p^f) whose reduction has order dividing m."""
    r = len(L)

    def mul(A, B):
        return [[sum(A[i][k] * B[k][j] for k in range(r)) % q for j in range(r)] for i in range(r)]

    def mpow(A, n):
        R = [[int(i == j) for j in range(r)] for i in range(r)]
        while n:
            if n & 1:
                R = mul(R, A)
            A = mul(A, A)
            n >>= 1
        return R
    if m == 1:
        return [[int(i == j) for j in range(r)] for i in range(r)]
    pf = p**f
    t = pf * pow(pf, -1, m)  # t = 1 mod m, t = 0 mod p^f
    return mpow(L, t)


def random_action(orders: Sequence[int], m: int, rng: random.Random,
                  types: dict | None = None) -> list[list[int]]:
    """A random automorphism matrix of prod Z_{orders} (prime powers) with T^m = I.

    ``types`` optionally fixes the factor multiset per (p, p^f) block.
    """
    orders = list(orders)
    s = len(orders)
    T = [[0] * s for _ in range(s)]
    blocks: dict[int, list[int]] = {}
    for i, n in enumerate(orders):
        blocks.setdefault(n, []).append(i)
    for q, idx in blocks.items():
        (p, f), = factorint(q).items()
        r = len(idx)
        F = GF(p)
        if types and q in types:
            choice = types[q]
        else:
            choice = rng.choice(factor_types(p, m, r))
        C = block_diag([companion(g) for g in choice])
        P = random_invertible(F, r, rng)
        M = P * C * P.inverse()
        lifted = _lift_p_prime([list(row) for row in M.rows], q, p, f, m)
        for a, i in enumerate(idx):
            for b, j in enumerate(idx):
                T[i][j] = lifted[a][b]
    return T


def random_spec(abelian_orders: Sequence[int], m: int, rng: random.Random, scramble_seed: int = 0,
                types: dict | None = None) -> ClassSGroupSpec:
    if math.gcd(math.prod(abelian_orders), m) != 1:
        raise SpecError(f"gcd(|A|, m) != 1 for A = {list(abelian_orders)}, m = {m}")
    orders = prime_power_orders(abelian_orders)
    T = random_action(orders, m, rng, types)
    spec = ClassSGroupSpec(tuple(orders), m, tuple(map(tuple, T)), scramble_seed)
    spec.validate()
    return spec


def spec_with_action_type(p: int, r: int, m: int, choice: Sequence[Poly], rng: random.Random,
                          scramble_seed: int = 0) -> ClassSGroupSpec:
    return random_spec([p] * r, m, rng, scramble_seed, types={p: tuple(choice)})


def census_specs(count: int, rng: random.Random, p: int = 3, r: int = 4, m: int = 4,
                 scramble: bool = True) -> list[ClassSGroupSpec]:
    """``count`` random specs of (Z_p)^r x| Z_m with action types drawn uniformly,
    plus one spec with the trivial action (the abelian case)."""
    types = factor_types(p, m, r)
    out = []
    for _ in range(count):
        choice = rng.choice(types)
        seed = rng.randrange(1, 2**31) if scramble else 0
        out.append(spec_with_action_type(p, r, m, choice, rng, seed))
    one = poly_from_ints(p, [-1, 1])
    out.append(spec_with_action_type(p, r, m, [one] * r, rng, rng.randrange(1, 2**31) if scramble else 0))
    return out


def isomorphic_copy(spec: ClassSGroupSpec, rng: random.Random, scramble_seed: int | None = None) -> ClassSGroupSpec:
    """The same group presented through a random change of basis of A (per homocyclic block)
    and a random unit power of y."""
    orders = list(spec.abelian_orders)
    s = len(orders)
    if any(len(factorint(n)) > 1 for n in orders) or s == 0:
        return spec.with_seed(rng.randrange(1, 2**31) if scramble_seed is None else scramble_seed)
    # block change of basis Q (only within equal orders keeps Q a valid automorphism)
    Q = [[0] * s for _ in range(s)]
    groups: dict[int, list[int]] = {}
    for i, n in enumerate(orders):
        groups.setdefault(n, []).append(i)
    for n, idx in groups.items():
        (p, _), = factorint(n).items()
        P = random_invertible(GF(p), len(idx), rng)
        for a, i in enumerate(idx):
            for b, j in enumerate(idx):
                Q[i][j] = (P.rows[a][b] + p * rng.randrange(n)) % n
    Qinv = _inverse_mod_blocks(Q, orders, groups)
    k = rng.choice([k for k in range(1, spec.m + 1) if math.gcd(k, spec.m) == 1]) if spec.m > 1 else 1
    Tk = _mat_pow(spec.action, k, orders)
    T2 = _mul(_mul(Q, Tk, orders), Qinv, orders)
    seed = rng.randrange(1, 2**31) if scramble_seed is None else scramble_seed
    out = ClassSGroupSpec(tuple(orders), spec.m, tuple(map(tuple, T2)), seed)
    out.validate()
    return out


def _mul(A, B, orders):
    s = len(orders)
    return [[sum(A[i][k] * B[k][j] for k in range(s)) % orders[i] for j in range(s)] for i in range(s)]


def _mat_pow(A, n, orders):
    s = len(orders)
    R = [[int(i == j) for j in range(s)] for i in range(s)]
    for _ in range(n):
        R = _mul(A, R, orders)
    return R


def _inverse_mod_blocks(Q, orders, groups):
    # Q is block diagonal over equal orders; invert each block over Z_n by powering
    s = len(orders)
    inv = [[0] * s for _ in range(s)]
    for n, idx in groups.items():
        B = [[Q[i][j] for j in idx] for i in idx]
        Bi = _int_matrix_inverse_mod(B, n)
        for a, i in enumerate(idx):
            for b, j in enumerate(idx):
                inv[i][j] = Bi[a][b]
    return inv


def _int_matrix_inverse_mod(B, n):
    r = len(B)
    A = [list(row) + [int(i == j) for j in range(r)] for i, row in enumerate(B)]
    for c in range(r):
        piv = next(i for i in range(c, r) if math.gcd(A[i][c], n) == 1)
        A[c], A[piv] = A[piv], A[c]
        inv = pow(A[c][c], -1, n)
        A[c] = [x * inv % n for x in A[c]]
        for i in range(r):
            if i != c and A[i][c]:
                f = A[i][c]
                A[i] = [(x - f * y) % n for x, y in zip(A[i], A[c])]
    return [row[r:] for row in A]
