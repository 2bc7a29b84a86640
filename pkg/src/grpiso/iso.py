"""Isomorphism testing for class-S groups, with explicit verified isomorphisms.

Pipeline: standard decompositions, abelian invariants of A, the conjugation
actions of y on A, their layer matrices (one per homocyclic type p^f, the
diagonal block of the action reduced mod p), a discrete log up to conjugacy on
those, and finally an A-isomorphism chi obtained by averaging a lift of the
layer conjugators over <y>.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Sequence

from . import intlin
from .abelian_engine import (
    AbelianBasis, GroupError, abelian_basis, decompose_over_basis, order_of, power,
)
from .blackbox import conjugate, elements, group_order
from .decompose import StandardDecomposition, standard_decompose
from .dlog_conj import ConjLogInstance, dlog_up_to_conjugacy
from .matrix_forms import Matrix, conjugator
from .numtheory import factorint, lift_unit

__all__ = [
    "ConjugationAction", "PhiImage", "Isomorphism", "IsoResult", "conjugation_action",
    "phi_image", "chi_from_conjugator", "verify_chi", "assemble_isomorphism",
    "verify_isomorphism", "group_isomorphism", "bruteforce_isomorphism", "ChiFailure",
]

MAX_K_TRIES = 64


class ChiFailure(GroupError):
    pass


# ---------------------------------------------------------------------------
# integer matrices acting on prod Z_{orders}
# ---------------------------------------------------------------------------


def _compose(A, B, target_orders) -> list[list[int]]:
    """A * B with row i reduced mod target_orders[i]."""
    n = len(B[0]) if B else 0
    inner = len(B)
    return [[sum(A[i][t] * B[t][j] for t in range(inner)) % target_orders[i] for j in range(n)]
            for i in range(len(A))]


def _identity(s: int) -> list[list[int]]:
    return intlin.identity(s)


def _mat_power(A, k: int, orders) -> list[list[int]]:
    R = [[int(i == j) % orders[i] for j in range(len(orders))] for i in range(len(orders))]
    base = [row[:] for row in A]
    while k:
        if k & 1:
            R = _compose(base, R, orders)
        base = _compose(base, base, orders)
        k >>= 1
    return R


def _apply(A, vec, target_orders) -> list[int]:
    return [sum(a * v for a, v in zip(row, vec)) % o for row, o in zip(A, target_orders)]


# ---------------------------------------------------------------------------
# conjugation actions and their layer images
# ---------------------------------------------------------------------------


@dataclass
class ConjugationAction:
    """y g_j y^-1 = prod_i g_i^{matrix[i][j]} over a prime-power basis of A."""

    basis: AbelianBasis
    matrix: list[list[int]]

    @property
    def orders(self) -> list[int]:
        return list(self.basis.orders)

    def order(self) -> int:
        s = len(self.orders)
        I = [[int(i == j) % self.orders[i] for j in range(s)] for i in range(s)]
        P, k = self.matrix, 1
        while P != I:
            P = _compose(self.matrix, P, self.orders)
            k += 1
        return k

    def power(self, k: int) -> list[list[int]]:
        return _mat_power(self.matrix, k, self.orders)


def conjugation_action(G, basis: AbelianBasis, y) -> ConjugationAction:
    cols = [decompose_over_basis(conjugate(G, y, g), basis) for g in basis.elements]
    s = len(cols)
    return ConjugationAction(basis, [[cols[j][i] for j in range(s)] for i in range(s)])


def _types(orders: Sequence[int]) -> list[tuple[int, int]]:
    out = []
    for q in orders:
        (p, f), = factorint(q).items()
        out.append((p, f))
    return out


@dataclass
class PhiImage:
    """One matrix over GF(p) per homocyclic type (p, f), in basis order."""

    types: list[tuple[int, int]]
    indices: list[list[int]]
    matrices: list[Matrix]

    def power(self, k: int) -> "PhiImage":
        return PhiImage(self.types, self.indices, [M ** k for M in self.matrices])

    def __eq__(self, other) -> bool:
        return isinstance(other, PhiImage) and self.types == other.types and self.matrices == other.matrices


def _type_indices(orders: Sequence[int]) -> tuple[list[tuple[int, int]], list[list[int]]]:
    types = _types(orders)
    distinct = list(dict.fromkeys(types))
    return distinct, [[i for i, t in enumerate(types) if t == d] for d in distinct]


def phi_image(action: ConjugationAction | tuple[Sequence[int], Sequence[Sequence[int]]]) -> PhiImage:
    """Layer matrices of a coprime-order automorphism: the diagonal type blocks mod p."""
    if isinstance(action, ConjugationAction):
        orders, U = action.orders, action.matrix
    else:
        orders, U = action
    types, indices = _type_indices(orders)
    mats = []
    for (p, f), idx in zip(types, indices):
        M = Matrix.from_ints(p, [[U[i][j] % p for j in idx] for i in idx])
        if not M.is_invertible():
            raise GroupError(f"layer matrix for type {p}^{f} is singular: automorphism order not coprime?")
        mats.append(M)
    return PhiImage(types, indices, mats)


# ---------------------------------------------------------------------------
# chi from layer conjugators
# ---------------------------------------------------------------------------


def chi_from_conjugator(X_list: Sequence[Matrix], orders1: Sequence[int], orders2: Sequence[int],
                        U1: Sequence[Sequence[int]], U2k: Sequence[Sequence[int]], m: int) -> list[list[int]]:
    """Integer matrix C (A1-coordinates -> A2-coordinates) with C U1 = U2k C.

    C = m^-1 sum_j U2k^j psi U1^-j where psi lifts X_list blockwise; when each X
    conjugates the layer matrices, C induces X on every layer and is therefore
    an isomorphism. The result is checked by :func:`verify_chi`.
    """
    types1, idx1 = _type_indices(orders1)
    types2, idx2 = _type_indices(orders2)
    if types1 != types2 or [len(a) for a in idx1] != [len(b) for b in idx2]:
        raise ChiFailure("A1 and A2 have different types")
    s = len(orders1)
    psi = [[0] * s for _ in range(s)]
    for X, I1, I2 in zip(X_list, idx1, idx2):
        for a, i2 in enumerate(I2):
            for b, i1 in enumerate(I1):
                psi[i2][i1] = X.rows[a][b]
    if s == 0:
        return []
    expo = math.lcm(*orders1)
    minv = pow(m, -1, expo) if expo > 1 else 0
    U1inv = _mat_power(U1, m - 1, orders1)
    acc = [[0] * s for _ in range(s)]
    left = _identity(s)
    right = _identity(s)
    for _ in range(m):
        term = _compose(_compose(left, psi, orders2), right, orders2)
        acc = [[(a + b) % o for a, b in zip(ra, rb)] for ra, rb, o in zip(acc, term, orders2)]
        left = _compose(U2k, left, orders2)
        right = _compose(right, U1inv, orders1) if s else right
    return [[(minv * v) % o for v in row] for row, o in zip(acc, orders2)]


def verify_chi(C, orders1, orders2, U1, U2k) -> bool:
    """C is a well-defined isomorphism A1 -> A2 and C U1 = U2k C."""
    s = len(orders1)
    if s == 0:
        return len(orders2) == 0
    for i in range(s):
        for j in range(s):
            if (orders1[j] * C[i][j]) % orders2[i]:
                return False
    if _compose(C, U1, orders2) != _compose(U2k, C, orders2):
        return False
    if sorted(orders1) != sorted(orders2):
        return False
    ker = intlin.kernel_mod([[C[i][j] for i in range(s)] for j in range(s)], orders2, orders1)
    return not ker


# ---------------------------------------------------------------------------
# isomorphisms
# ---------------------------------------------------------------------------


@dataclass
class Isomorphism:
    """mu(x y1^j) = chi(x) y2^(k j), stored with the images of G's generators."""

    chi: list[list[int]]
    k: int
    basis1: list
    basis2: list
    y1: Any
    y2: Any
    gen_images: list

    def image_table(self, G) -> list[tuple[int, Any]]:
        return list(enumerate(self.gen_images))


@dataclass
class IsoResult:
    isomorphic: bool | None
    reason: str
    iso: Isomorphism | None = None
    details: dict = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        return {True: "ISOMORPHIC", False: "NOT-ISOMORPHIC", None: "FAIL"}[self.isomorphic]


def assemble_isomorphism(G, H, B1: AbelianBasis, B2: AbelianBasis, y1, y2, m: int, C, k: int) -> Isomorphism:
    table1 = B1.table()
    images = []
    for g in G.gens:
        # step x = g y1^j until it lands in A1; then g = x y1^-j
        x, j = g, 0
        while x not in table1:
            x = G.mul(x, y1)
            j += 1
            if j > m:
                raise ChiFailure("generator outside A1 <y1>")
        vec = table1[x]
        cx = B2.element(_apply(C, vec, B2.orders))
        images.append(H.mul(cx, power(H, y2, (-k * j) % max(m, 1))))
    return Isomorphism(C, k, list(B1.elements), list(B2.elements), y1, y2, images)


def verify_isomorphism(G, H, iso: Isomorphism | Sequence) -> bool:
    """Extend generator images multiplicatively over all of G; check consistency, injectivity, |G| = |H|."""
    gen_images = iso.gen_images if isinstance(iso, Isomorphism) else list(iso)
    if len(gen_images) != len(G.gens):
        return False
    img = {G.identity: H.identity}
    frontier = [G.identity]
    while frontier:
        nxt = []
        for a in frontier:
            ia = img[a]
            for g, h in zip(G.gens, gen_images):
                b = G.mul(a, g)
                ib = H.mul(ia, h)
                seen = img.get(b)
                if seen is None:
                    img[b] = ib
                    nxt.append(b)
                elif seen != ib:
                    return False
        frontier = nxt
    if len(set(img.values())) != len(img):
        return False
    return len(img) == group_order(H)


def _decomposition(G) -> tuple[StandardDecomposition, AbelianBasis]:
    if "iso_decomposition" not in G.cache:
        sd = standard_decompose(G)
        G.cache["iso_decomposition"] = (sd, abelian_basis(sd.A_gens, G))
    return G.cache["iso_decomposition"]


def group_isomorphism(G, H, backend: str = "brute") -> IsoResult:
    """Decide G = H for class-S black-box groups, returning a verified isomorphism when they are."""
    sd1, B1 = _decomposition(G)
    sd2, B2 = _decomposition(H)
    n1, n2 = B1.size * sd1.m, B2.size * sd2.m
    details = {"|G|": n1, "|H|": n2, "m1": sd1.m, "m2": sd2.m,
               "A1": list(B1.orders), "A2": list(B2.orders)}
    if n1 != n2:
        return IsoResult(False, f"orders differ: {n1} vs {n2}", details=details)
    if sd1.m != sd2.m:
        return IsoResult(False, f"|y1| = {sd1.m} differs from |y2| = {sd2.m}", details=details)
    if list(B1.orders) != list(B2.orders):
        return IsoResult(False, "A1 and A2 are not isomorphic", details=details)
    m = sd1.m
    y1, y2 = sd1.v, sd2.v
    act1 = conjugation_action(G, B1, y1)
    act2 = conjugation_action(H, B2, y2)
    o1, o2 = act1.order(), act2.order()
    details.update({"action_orders": (o1, o2)})
    if o1 != o2:
        return IsoResult(False, f"conjugation actions have different orders ({o1} vs {o2})", details=details)
    phi1, phi2 = phi_image(act1), phi_image(act2)
    inst = ConjLogInstance.from_lists(phi1.matrices, phi2.matrices)
    sol = dlog_up_to_conjugacy(inst, backend=backend)
    if sol is None:
        return IsoResult(False, "no exponent k makes the actions conjugate", details=details)
    mo = sol.coset.modulus  # the common order o1 of the layer matrices
    candidates = [sol.k % mo if mo > 1 else 0] + [c for c in sol.coset.members() if c != sol.k % mo]
    for t, c in enumerate(candidates[:MAX_K_TRIES]):
        X_list = sol.X_list if t == 0 else [conjugator(M1, M2 ** c) for M1, M2 in inst.blocks]
        K = lift_unit(c % mo, mo, m) if m > 1 else 1
        K = K if K else 1
        U2k = act2.power(K)
        C = chi_from_conjugator(X_list, B1.orders, B2.orders, act1.matrix, U2k, m)
        if not verify_chi(C, B1.orders, B2.orders, act1.matrix, U2k):
            continue
        iso = assemble_isomorphism(G, H, B1, B2, y1, y2, m, C, K)
        if verify_isomorphism(G, H, iso):
            details["k"] = K
            return IsoResult(True, f"isomorphism found with k = {K}", iso, details)
    return IsoResult(None, "could not assemble a verified isomorphism", details=details)


# ---------------------------------------------------------------------------
# reference search
# ---------------------------------------------------------------------------


def _profile(G) -> dict:
    """(order, centralizer size) of every element."""
    if "profile" not in G.cache:
        elems = list(elements(G))
        G.cache["profile"] = {g: (order_of(G, g), sum(1 for h in elems if G.mul(g, h) == G.mul(h, g)))
                              for g in elems}
    return G.cache["profile"]


def bruteforce_isomorphism(G, H, limit: int = 10**7) -> list | None:
    """Generator images of some isomorphism G -> H found by backtracking search, or None.

    Candidate images must share the element's order and centralizer size, and
    every partial assignment must extend to an injective homomorphism of the
    subgroup generated so far.
    """
    pg, ph = _profile(G), _profile(H)
    if len(pg) != len(ph):
        return None
    if sorted(pg.values()) != sorted(ph.values()):
        return None
    gens = list(G.gens)
    by_prof: dict = {}
    for h, pr in ph.items():
        by_prof.setdefault(pr, []).append(h)
    budget = [limit]

    def extend(assigned: list) -> dict | None:
        img = {G.identity: H.identity}
        frontier = [G.identity]
        gs = gens[:len(assigned)]
        while frontier:
            nxt = []
            for a in frontier:
                for g, h in zip(gs, assigned):
                    b = G.mul(a, g)
                    ib = H.mul(img[a], h)
                    budget[0] -= 1
                    seen = img.get(b)
                    if seen is None:
                        img[b] = ib
                        nxt.append(b)
                    elif seen != ib:
                        return None
            frontier = nxt
        if len(set(img.values())) != len(img):
            return None
        return img

    def rec(assigned: list) -> list | None:
        if budget[0] <= 0:
            raise GroupError("brute-force isomorphism search exceeded its budget")
        if len(assigned) == len(gens):
            return assigned
        g = gens[len(assigned)]
        for h in by_prof[pg[g]]:
            cand = assigned + [h]
            if extend(cand) is not None:
                res = rec(cand)
                if res is not None:
                    return res
        return None

    res = rec([])
    if res is not None and not verify_isomorphism(G, H, res):
        raise AssertionError("brute-force search returned an invalid map")
    return res
