"""Discrete log up to conjugacy: k and X^(h) with X^(h) M1^(h) = (M2^(h))^k X^(h) for all h.

Each matrix is summarized by its elementary-divisor table; powering by a unit k
powers the roots bucket by bucket, so the search for k becomes one set
discrete logarithm instance over all buckets of all blocks.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .abelian_engine import UnitGroup, subgroup_from_elements
from .matrix_forms import Matrix, MatrixError, conjugator, elementary_divisors, mat_order, similar
from .numtheory import lcm_list, lift_unit
from .setdlog import FieldMultiset, SolutionCoset, set_discrete_log

__all__ = [
    "ConjLogInstance", "ConjLogSolution", "common_exponent", "dlog_up_to_conjugacy",
    "bruteforce_conj_solutions",
]


@dataclass
class ConjLogInstance:
    blocks: list[tuple[Matrix, Matrix]]

    def __post_init__(self):
        for M1, M2 in self.blocks:
            if M1.field != M2.field or M1.r != M2.r:
                raise MatrixError("block matrices differ in field or dimension")
            if not (M1.is_invertible() and M2.is_invertible()):
                raise MatrixError("block matrices must be invertible")

    @classmethod
    def from_lists(cls, first: Sequence[Matrix], second: Sequence[Matrix]) -> "ConjLogInstance":
        if len(first) != len(second):
            raise MatrixError("matrix lists differ in length")
        return cls(list(zip(first, second)))

    @property
    def m1(self) -> int:
        return common_exponent([b[0] for b in self.blocks])

    @property
    def m2(self) -> int:
        return common_exponent([b[1] for b in self.blocks])


@dataclass
class ConjLogSolution:
    k: int
    X_list: list[Matrix]
    coset: SolutionCoset = field(repr=False, default=None)

    def verify(self, inst: ConjLogInstance) -> bool:
        return all(X.is_invertible() and X * M1 == (M2 ** self.k) * X
                   for X, (M1, M2) in zip(self.X_list, inst.blocks))


def common_exponent(mats: Sequence[Matrix]) -> int:
    """Smallest m >= 1 with M^m = I for every M in the list."""
    return lcm_list(mat_order(M) for M in mats) if mats else 1


def _kernel_gens(small: int, m: int) -> list[int]:
    # generators of ker(Z_m^* -> Z_small^*)
    U = UnitGroup(m)
    ker = [k for k in range(1 % m, m, small) if math.gcd(k, m) == 1] if m > 1 else [0]
    return subgroup_from_elements(U, ker)


def dlog_up_to_conjugacy(inst: ConjLogInstance, backend: str = "brute") -> ConjLogSolution | None:
    """A verified (k, X-list), with the full coset of valid k, or None when no k exists."""
    m1, m2 = inst.m1, inst.m2
    if m2 % m1:
        return None
    e = m2 // m1
    m = m1
    reduced = [(M1, M2 ** e) for M1, M2 in inst.blocks]

    S_list, T_list = [], []
    for M1, M2 in reduced:
        ed1, ed2 = elementary_divisors(M1), elementary_divisors(M2)
        for key in sorted(set(ed1) | set(ed2)):
            S, T = ed1.get(key, []), ed2.get(key, [])
            if not S and not T:
                continue
            if len(S) != len(T):
                return None
            S_list.append(FieldMultiset(S))
            T_list.append(FieldMultiset(T))
    sdl = set_discrete_log(S_list, T_list, backend=backend)
    if sdl is None or sdl.scale != 1:
        # units preserve eigenvalue orders, so a scale other than 1 rules out every k
        return None

    # solutions in Z_m^*: the preimage of the eigenvalue-level coset in Z_{m_S}^*
    mS = sdl.m
    rep = lift_unit(sdl.rep, mS, m)
    gens = [lift_unit(g, mS, m) for g in sdl.gens] + _kernel_gens(mS, m)
    coset = SolutionCoset(m, e, rep, subgroup_from_elements(UnitGroup(m), gens))
    k = coset.representative
    X_list = [conjugator(M1, M2 ** k) for M1, M2 in inst.blocks]
    sol = ConjLogSolution(k, X_list, coset)
    if not sol.verify(inst):
        raise AssertionError("conjugator failed verification")
    return sol


def bruteforce_conj_solutions(inst: ConjLogInstance) -> list[int]:
    """All k in [0, m2) with M1^(h) similar to (M2^(h))^k for every h (reference oracle)."""
    m2 = inst.m2
    return [k for k in range(m2) if all(similar(M1, M2 ** k) for M1, M2 in inst.blocks)]
