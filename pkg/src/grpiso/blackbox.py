"""Black-box groups with unique scrambled encodings, built from class-S specs
(A x| Z_m with an explicit action matrix) or from multiplication tables.

Algorithms only see byte strings, ``mul``, ``identity`` and ``gens``. The
internal index behind an encoding is reachable through :meth:`BlackBoxGroup.internal`
for tests and verifiers only.
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

from .abelian_engine import GroupError, closure, inverse, max_group_order, order_of
from .numtheory import lcm_list

__all__ = [
    "SpecError", "InvalidEncoding", "ClassSGroupSpec", "BlackBoxGroup", "build_group",
    "table_group", "inverse", "commutator", "conjugate", "normal_closure",
    "derived_subgroup_gens", "derived_subgroup", "group_order", "elements",
    "parse_spec", "format_spec", "load_spec", "save_spec", "load_table",
]


class SpecError(ValueError):
    pass


class InvalidEncoding(GroupError):
    pass


@dataclass(frozen=True)
class ClassSGroupSpec:
    """A = Z_{n_1} x ... x Z_{n_s}; y g_j y^-1 = prod g_i^{action[i][j]}; |y| = m."""

    abelian_orders: tuple[int, ...]
    m: int
    action: tuple[tuple[int, ...], ...]
    scramble_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "abelian_orders", tuple(int(n) for n in self.abelian_orders))
        object.__setattr__(self, "action", tuple(tuple(int(x) for x in row) for row in self.action))

    @property
    def order(self) -> int:
        return math.prod(self.abelian_orders) * self.m

    def with_seed(self, seed: int) -> "ClassSGroupSpec":
        return ClassSGroupSpec(self.abelian_orders, self.m, self.action, seed)

    def validate(self) -> None:
        ns, m, T = self.abelian_orders, self.m, self.action
        s = len(ns)
        if m < 1 or any(n < 1 for n in ns):
            raise SpecError("orders must be positive")
        if math.gcd(math.prod(ns), m) != 1:
            raise SpecError(f"gcd(|A| = {math.prod(ns)}, m = {m}) != 1: not in class S")
        if len(T) != s or any(len(row) != s for row in T):
            raise SpecError(f"action must be a {s}x{s} matrix")
        for i in range(s):
            for j in range(s):
                if (ns[j] * T[i][j]) % ns[i]:
                    raise SpecError(f"action entry ({i},{j}) does not define a homomorphism of A")
        P = _identity_action(s)
        for _ in range(m):
            P = _compose(T, P, ns)
        if P != _identity_action(s, ns):
            raise SpecError(f"action^m is not the identity automorphism (m = {m})")


def _identity_action(s: int, ns: Sequence[int] | None = None) -> list[list[int]]:
    return [[int(i == j) % (ns[i] if ns else 2**64) for j in range(s)] for i in range(s)]


def _compose(T, P, ns) -> list[list[int]]:
    s = len(ns)
    return [[sum(T[i][k] * P[k][j] for k in range(s)) % ns[i] for j in range(s)] for i in range(s)]


# ---------------------------------------------------------------------------
# Scrambling
# ---------------------------------------------------------------------------


class _Feistel:
    """Seeded balanced Feistel permutation on [0, n), cycle-walking to stay in range."""

    ROUNDS = 4

    def __init__(self, n: int, seed: int):
        self.n = n
        bits = max(2, (n - 1).bit_length())
        bits += bits % 2
        self.half = bits // 2
        self.mask = (1 << self.half) - 1
        self.keys = [hashlib.blake2b(f"{seed}:{r}".encode(), digest_size=8).digest() for r in range(self.ROUNDS)]
        self._fwd: dict[int, int] = {}
        self._bwd: dict[int, int] = {}

    def _round(self, r: int, x: int) -> int:
        h = hashlib.blake2b(x.to_bytes(8, "little"), key=self.keys[r], digest_size=8).digest()
        return int.from_bytes(h, "little") & self.mask

    def _enc(self, x: int) -> int:
        L, R = x >> self.half, x & self.mask
        for r in range(self.ROUNDS):
            L, R = R, L ^ self._round(r, R)
        return (L << self.half) | R

    def _dec(self, x: int) -> int:
        L, R = x >> self.half, x & self.mask
        for r in reversed(range(self.ROUNDS)):
            L, R = R ^ self._round(r, L), L
        return (L << self.half) | R

    def forward(self, x: int) -> int:
        y = self._fwd.get(x)
        if y is None:
            y = self._enc(x)
            while y >= self.n:
                y = self._enc(y)
            self._fwd[x] = y
            self._bwd[y] = x
        return y

    def backward(self, y: int) -> int:
        x = self._bwd.get(y)
        if x is None:
            x = self._dec(y)
            while x >= self.n:
                x = self._dec(x)
            self._bwd[y] = x
            self._fwd[x] = y
        return x


class BlackBoxGroup:
    """Opaque group oracle over fixed-length byte-string encodings."""

    def __init__(self, order: int, mul_index: Callable[[int, int], int], identity_index: int,
                 gen_indices: Sequence[int], scramble_seed: int = 0, spec: ClassSGroupSpec | None = None,
                 name: str = ""):
        self._n = order
        self._mul_index = mul_index
        self.scramble_seed = scramble_seed
        self.spec = spec
        self.name = name or (f"spec{spec.abelian_orders}x|Z{spec.m}" if spec else f"G{order}")
        self.nbytes = math.ceil(math.log2(order) / 8) + 1 if order > 1 else 1
        self._perm = _Feistel(order, scramble_seed) if scramble_seed else None
        self.identity = self._encode(identity_index)
        self.gens = [self._encode(i) for i in gen_indices]
        self.cache: dict = {}

    def __repr__(self) -> str:
        return f"BlackBoxGroup({self.name}, seed={self.scramble_seed})"

    @property
    def transparent(self) -> bool:
        return self._perm is None

    def _encode(self, idx: int) -> bytes:
        if self._perm is not None:
            idx = self._perm.forward(idx)
        return idx.to_bytes(self.nbytes, "big")

    def _decode(self, s: bytes) -> int:
        if not isinstance(s, bytes) or len(s) != self.nbytes:
            raise InvalidEncoding(f"not a valid encoding: {s!r}")
        idx = int.from_bytes(s, "big")
        if idx >= self._n:
            raise InvalidEncoding(f"not a valid encoding: {s!r}")
        if self._perm is not None:
            idx = self._perm.backward(idx)
        return idx

    def mul(self, a: bytes, b: bytes) -> bytes:
        return self._encode(self._mul_index(self._decode(a), self._decode(b)))

    def is_element(self, s) -> bool:
        try:
            self._decode(s)
        except InvalidEncoding:
            return False
        return True

    # -- verifier/test access only ------------------------------------------
    def internal(self, g: bytes) -> int:
        return self._decode(g)

    def from_internal(self, idx: int) -> bytes:
        return self._encode(idx)

    def spec_coords(self, g: bytes) -> tuple[tuple[int, ...], int]:
        """(vector in A, exponent of y) of a spec-built group element."""
        if self.spec is None:
            raise ValueError("not a spec-built group")
        return _unrank(self._decode(g), self.spec.abelian_orders)

    def all_elements(self) -> list[bytes]:
        return [self._encode(i) for i in range(self._n)]


def _unrank(idx: int, ns: Sequence[int]) -> tuple[tuple[int, ...], int]:
    a_size = math.prod(ns)
    i, rest = divmod(idx, a_size)
    vec = []
    for n in ns:
        rest, c = divmod(rest, n)
        vec.append(c)
    return tuple(vec), i


def _rank(vec: Sequence[int], i: int, ns: Sequence[int]) -> int:
    idx = 0
    for c, n in zip(reversed(vec), reversed(ns)):
        idx = idx * n + c
    return i * math.prod(ns) + idx


def build_group(spec: ClassSGroupSpec) -> BlackBoxGroup:
    """The semidirect product A x| Z_m of a validated spec, as a black box."""
    spec.validate()
    ns, m = spec.abelian_orders, spec.m
    s = len(ns)
    powers = [_identity_action(s, ns)]
    for _ in range(1, m):
        powers.append(_compose(spec.action, powers[-1], ns))
    order = spec.order
    if order > 10**7:
        raise SpecError(f"group order {order} too large for desk-scale black boxes")
    unranked = [_unrank(k, ns) for k in range(order)] if order <= 2 * 10**5 else None

    def unrank(k: int):
        return unranked[k] if unranked is not None else _unrank(k, ns)

    def mul_index(x: int, y: int) -> int:
        a, i = unrank(x)
        b, j = unrank(y)
        Ti = powers[i]
        c = [(a[r] + sum(Ti[r][k] * b[k] for k in range(s))) % ns[r] for r in range(s)]
        return _rank(c, (i + j) % m, ns)

    gens = [_rank([int(k == j) for k in range(s)], 0, ns) for j in range(s) if ns[j] > 1]
    if m > 1:
        gens.append(_rank([0] * s, 1, ns))
    return BlackBoxGroup(order, mul_index, 0, gens, spec.scramble_seed, spec)


def table_group(table: Sequence[Sequence[int]], scramble_seed: int = 0, validate: bool = True,
                name: str = "") -> BlackBoxGroup:
    """Black box over a multiplication table (entries are 0-based indices)."""
    n = len(table)
    if any(len(row) != n for row in table):
        raise SpecError("multiplication table must be square")
    if any(not 0 <= x < n for row in table for x in row):
        raise SpecError("table entries out of range")
    ident = next((e for e in range(n) if all(table[e][x] == x and table[x][e] == x for x in range(n))), None)
    if ident is None:
        raise SpecError("table has no identity")
    if validate:
        for row in table:
            if len(set(row)) != n:
                raise SpecError("table is not a Latin square")
        if n <= 256:
            for a in range(n):
                for b in range(n):
                    ab = table[a][b]
                    for c in range(n):
                        if table[ab][c] != table[a][table[b][c]]:
                            raise SpecError("table is not associative")
    tab = [list(r) for r in table]

    def mul_index(x: int, y: int) -> int:
        return tab[x][y]

    # greedy generating set
    gens: list[int] = []
    span = {ident}
    for x in range(n):
        if x not in span:
            gens.append(x)
            frontier = list(span)
            span = {ident}
            frontier = [ident]
            while frontier:
                nxt = []
                for a in frontier:
                    for g in gens:
                        b = tab[a][g]
                        if b not in span:
                            span.add(b)
                            nxt.append(b)
                frontier = nxt
    return BlackBoxGroup(n, mul_index, ident, gens, scramble_seed, None, name=name or f"table{n}")


# ---------------------------------------------------------------------------
# Generic utilities
# ---------------------------------------------------------------------------


def commutator(G, g, h):
    """[g, h] = g h g^-1 h^-1."""
    return G.mul(G.mul(g, h), G.mul(inverse(G, g), inverse(G, h)))


def conjugate(G, z, w):
    """z w z^-1."""
    return G.mul(G.mul(z, w), inverse(G, z))


def normal_closure(G, seeds: Sequence, cap: int | None = None) -> tuple[list, set]:
    """(generators, elements) of the smallest normal subgroup containing ``seeds``."""
    cap = cap or max_group_order()
    gens = list(dict.fromkeys(x for x in seeds if x != G.identity))
    elems = closure(G, gens, cap)
    queue = list(gens)
    while queue:
        w = queue.pop()
        for g in G.gens:
            c = conjugate(G, g, w)
            if c not in elems:
                gens.append(c)
                queue.append(c)
                elems = closure(G, gens, cap)
    return gens, elems


def derived_subgroup(G) -> tuple[list, set]:
    """(generators, elements) of G' = [G, G] (cached on the group)."""
    if "derived" not in G.cache:
        comms = [commutator(G, a, b) for i, a in enumerate(G.gens) for b in G.gens[i + 1:]]
        G.cache["derived"] = normal_closure(G, comms)
    return G.cache["derived"]


def derived_subgroup_gens(G) -> list:
    return list(derived_subgroup(G)[0])


def elements(G) -> set:
    if "elements" not in G.cache:
        G.cache["elements"] = closure(G, G.gens)
    return G.cache["elements"]


def group_order(G) -> int:
    spec = getattr(G, "spec", None)
    if spec is not None and getattr(G, "transparent", False):
        return spec.order
    return len(elements(G))


def group_exponent(G) -> int:
    return lcm_list(order_of(G, g) for g in elements(G))


# ---------------------------------------------------------------------------
# File formats
# ---------------------------------------------------------------------------


def parse_spec(text: str) -> ClassSGroupSpec:
    """``key = value`` lines: abelian, m, action (rows split by ';'), scramble_seed."""
    fields: dict[str, str] = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise SpecError(f"malformed spec line: {raw!r}")
        key, value = (t.strip() for t in line.split("=", 1))
        fields[key] = value
    try:
        orders = tuple(int(t) for t in fields.get("abelian", "").replace(",", " ").split())
        m = int(fields.get("m", "1"))
        rows = [r for r in fields.get("action", "").split(";") if r.strip()]
        action = tuple(tuple(int(t) for t in r.replace(",", " ").split()) for r in rows)
        seed = int(fields.get("scramble_seed", "0"))
    except ValueError as exc:
        raise SpecError(f"malformed spec: {exc}") from None
    if not action and orders:
        action = tuple(tuple(int(i == j) for j in range(len(orders))) for i in range(len(orders)))
    return ClassSGroupSpec(orders, m, action, seed)


def format_spec(spec: ClassSGroupSpec) -> str:
    rows = "; ".join(" ".join(map(str, r)) for r in spec.action)
    return (f"abelian = {','.join(map(str, spec.abelian_orders))}\n"
            f"m = {spec.m}\n"
            f"action = {rows}\n"
            f"scramble_seed = {spec.scramble_seed}\n")


def load_spec(path: str | Path) -> ClassSGroupSpec:
    return parse_spec(Path(path).read_text())


def save_spec(spec: ClassSGroupSpec, path: str | Path) -> None:
    Path(path).write_text(format_spec(spec))


def load_table(path: str | Path, scramble_seed: int = 0) -> BlackBoxGroup:
    """First line: order n; then n lines of n indices."""
    lines = [ln.split() for ln in Path(path).read_text().splitlines() if ln.strip()]
    try:
        n = int(lines[0][0])
        table = [[int(t) for t in row] for row in lines[1:1 + n]]
    except (ValueError, IndexError):
        raise SpecError("malformed multiplication-table file") from None
    if len(table) != n:
        raise SpecError(f"expected {n} rows")
    return table_group(table, scramble_seed, name=Path(path).stem)
