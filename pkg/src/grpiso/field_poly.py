"""Exact arithmetic in GF(p), GF(p^d) and univariate polynomials over them.

Fields expose their arithmetic on *raw* values (``int`` for GF(p), a tuple of
``d`` residues for GF(p^d)) so that polynomials and matrices can work without
wrapper objects. :class:`FieldElem` wraps a raw value for operator syntax.
"""
from __future__ import annotations

import itertools
import random
from functools import lru_cache
from typing import Any, Iterable, Sequence

from .numtheory import divisors, factorint, is_prime

__all__ = [
    "FiniteField", "PrimeField", "ExtField", "FieldElem", "ExtFieldElem", "Poly",
    "GF", "ext_field", "ff_arith", "mult_order", "find_irreducible", "is_irreducible",
    "factor_poly", "squarefree_decomposition", "distinct_degree_factorization",
    "equal_degree_split", "roots_in_splitting_ext", "minimal_subfield_degree",
    "poly_gcd", "poly_from_ints",
]


class FiniteField:
    """Common interface; subclasses fix the raw representation."""

    p: int
    d: int
    q: int

    # -- raw arithmetic, overridden -------------------------------------
    zero: Any
    one: Any

    def add(self, a, b): raise NotImplementedError
    def sub(self, a, b): raise NotImplementedError
    def neg(self, a): raise NotImplementedError
    def mul(self, a, b): raise NotImplementedError
    def from_int(self, n: int): raise NotImplementedError
    def elements(self) -> Iterable: raise NotImplementedError
    def random(self, rng: random.Random): raise NotImplementedError

    def inv(self, a):
        if a == self.zero:
            raise ZeroDivisionError(f"zero has no inverse in {self}")
        return self.pow(a, self.q - 2)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, n: int):
        if n < 0:
            a, n = self.inv(a), -n
        result = self.one
        while n:
            if n & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            n >>= 1
        return result

    def nonzero(self) -> list:
        return [a for a in self.elements() if a != self.zero]

    def __call__(self, value) -> "FieldElem":
        if isinstance(value, int):
            return FieldElem(self, self.from_int(value))
        return FieldElem(self, self.coerce(value))

    def coerce(self, value):
        return value

    def elem(self, raw) -> "FieldElem":
        return FieldElem(self, raw)

    def prime_subfield(self) -> "PrimeField":
        return GF(self.p)


class PrimeField(FiniteField):
    """GF(p) with raw values ``0 <= a < p``."""

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = self.q = p
        self.d = 1
        self.zero, self.one = 0, 1

    def __repr__(self) -> str:
        return f"GF({self.p})"

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("GF", self.p))

    def add(self, a, b): return (a + b) % self.p
    def sub(self, a, b): return (a - b) % self.p
    def neg(self, a): return -a % self.p
    def mul(self, a, b): return a * b % self.p
    def from_int(self, n: int): return n % self.p
    def elements(self): return range(self.p)
    def random(self, rng): return rng.randrange(self.p)

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError(f"zero has no inverse in {self}")
        return pow(a, -1, self.p)

    def pow(self, a, n: int):
        if n < 0:
            return pow(self.inv(a), -n, self.p)
        return pow(a, n, self.p)

    def coerce(self, value):
        if isinstance(value, (tuple, list)):
            (value,) = value
        return value % self.p


class ExtField(FiniteField):
    """GF(p)[x]/(modulus) with raw values as length-d coefficient tuples, lowest first."""

    def __init__(self, p: int, modulus: "Poly | Sequence[int]"):
        base = GF(p)
        if isinstance(modulus, Poly):
            coeffs = [int(c) for c in modulus.coeffs]
        else:
            coeffs = [c % p for c in modulus]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        d = len(coeffs) - 1
        if d < 1 or coeffs[-1] != 1:
            raise ValueError("modulus must be monic of degree >= 1")
        mod_poly = Poly(base, coeffs)
        if not is_irreducible(mod_poly):
            raise ValueError(f"{mod_poly} is reducible over GF({p})")
        self.p, self.d, self.q = p, d, p**d
        self.modulus = tuple(coeffs)
        self.modulus_poly = mod_poly
        self.zero = (0,) * d
        self.one = (1,) + (0,) * (d - 1)
        # x^d = -sum(m_i x^i)
        self._red = tuple(-c % p for c in coeffs[:-1])

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.d})[{self.modulus_poly}]"

    def __eq__(self, other) -> bool:
        return isinstance(other, ExtField) and other.modulus == self.modulus and other.p == self.p

    def __hash__(self) -> int:
        return hash(("GFext", self.p, self.modulus))

    def add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x % self.p for x in a)

    def mul(self, a, b):
        p, d = self.p, self.d
        prod = [0] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        red = self._red
        for k in range(2 * d - 2, d - 1, -1):
            c = prod[k] % p
            if c:
                for i, r in enumerate(red):
                    prod[k - d + i] += c * r
        return tuple(c % p for c in prod[:d])

    def from_int(self, n: int):
        return (n % self.p,) + (0,) * (self.d - 1)

    def gen(self):
        """The class of x, a root of the modulus."""
        if self.d == 1:
            return (-self.modulus[0] % self.p,)
        return (0, 1) + (0,) * (self.d - 2)

    def elements(self):
        for c in itertools.product(range(self.p), repeat=self.d):
            yield tuple(reversed(c))

    def random(self, rng):
        return tuple(rng.randrange(self.p) for _ in range(self.d))

    def coerce(self, value):
        value = tuple(int(c) % self.p for c in value)
        if len(value) != self.d:
            raise ValueError(f"expected {self.d} coefficients, got {len(value)}")
        return value

    def embed(self, a: int):
        """Image of a prime-field residue."""
        return self.from_int(a)


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


@lru_cache(maxsize=None)
def ext_field(p: int, d: int) -> FiniteField:
    """Canonical GF(p^d) used whenever elements from independent computations must compare."""
    if d == 1:
        return GF(p)
    return ExtField(p, find_irreducible(p, d, seed=0))


class FieldElem:
    """A field element with operator syntax. Equality is raw equality."""

    __slots__ = ("field", "raw")

    def __init__(self, field: FiniteField, raw):
        self.field = field
        self.raw = raw

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.raw if isinstance(self.raw, tuple) else (self.raw,)

    def _check(self, other) -> Any:
        if isinstance(other, int):
            return self.field.from_int(other)
        if not isinstance(other, FieldElem) or other.field != self.field:
            raise ValueError(f"mismatched fields: {self.field} vs {getattr(other, 'field', other)}")
        return other.raw

    def __add__(self, o): return FieldElem(self.field, self.field.add(self.raw, self._check(o)))
    def __sub__(self, o): return FieldElem(self.field, self.field.sub(self.raw, self._check(o)))
    def __mul__(self, o): return FieldElem(self.field, self.field.mul(self.raw, self._check(o)))
    def __truediv__(self, o): return FieldElem(self.field, self.field.div(self.raw, self._check(o)))
    __radd__ = __add__
    __rmul__ = __mul__
    def __neg__(self): return FieldElem(self.field, self.field.neg(self.raw))
    def __pow__(self, n: int): return FieldElem(self.field, self.field.pow(self.raw, n))

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self.raw == self.field.from_int(other)
        return isinstance(other, FieldElem) and other.field == self.field and other.raw == self.raw

    def __hash__(self) -> int:
        return hash(self.raw)

    def __lt__(self, other: "FieldElem") -> bool:
        return self.raw < other.raw

    def __bool__(self) -> bool:
        return self.raw != self.field.zero

    def __repr__(self) -> str:
        if self.field.d == 1:
            return str(self.raw)
        return "[" + ",".join(map(str, self.raw)) + "]"

    def mult_order(self) -> int:
        return mult_order(self)


ExtFieldElem = FieldElem


def ff_arith(a: FieldElem, b: FieldElem, op: str) -> FieldElem:
    ops = {"add": a.__add__, "sub": a.__sub__, "mul": a.__mul__, "div": a.__truediv__}
    if op not in ops:
        raise ValueError(f"unknown op {op!r}")
    if b.field != a.field:
        raise ValueError("mismatched fields")
    return ops[op](b)


def mult_order(a: FieldElem | tuple) -> int:
    """Multiplicative order of a nonzero element (accepts ``FieldElem`` or ``(field, raw)``)."""
    field, raw = (a.field, a.raw) if isinstance(a, FieldElem) else a
    if raw == field.zero:
        raise ValueError("zero has no multiplicative order")
    n = field.q - 1
    for r in factorint(n) if n > 1 else ():
        while n % r == 0 and field.pow(raw, n // r) == field.one:
            n //= r
    return n


def minimal_subfield_degree(a: FieldElem) -> int:
    """Smallest e with a in GF(p^e), i.e. a^(p^e) = a."""
    field = a.field
    for e in divisors(field.d):
        if field.pow(a.raw, field.p**e) == a.raw:
            return e
    raise AssertionError("unreachable: a^(p^d) = a always holds")


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------


class Poly:
    """Univariate polynomial over a finite field, coefficients lowest degree first."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FiniteField, coeffs: Iterable = ()):
        cs = list(coeffs)
        zero = field.zero
        while cs and cs[-1] == zero:
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    @classmethod
    def x(cls, field: FiniteField) -> "Poly":
        return cls(field, [field.zero, field.one])

    @classmethod
    def const(cls, field: FiniteField, c) -> "Poly":
        return cls(field, [c])

    @classmethod
    def one(cls, field: FiniteField) -> "Poly":
        return cls(field, [field.one])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else self.field.zero

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == self.field.one

    def monic(self) -> "Poly":
        if self.is_zero() or self.is_monic():
            return self
        inv = self.field.inv(self.lc)
        return Poly(self.field, [self.field.mul(c, inv) for c in self.coeffs])

    def _same(self, other: "Poly") -> None:
        if other.field != self.field:
            raise ValueError("polynomials over different fields")

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and other.field == self.field and other.coeffs == self.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __lt__(self, other: "Poly") -> bool:
        return (self.degree, self.coeffs[::-1]) < (other.degree, other.coeffs[::-1])

    def __add__(self, other: "Poly") -> "Poly":
        self._same(other)
        F = self.field
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Poly(F, [F.add(x, b[i]) if i < len(b) else x for i, x in enumerate(a)])

    def __neg__(self) -> "Poly":
        return Poly(self.field, [self.field.neg(c) for c in self.coeffs])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        self._same(other)
        F = self.field
        if self.is_zero() or other.is_zero():
            return Poly(F)
        out = [F.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x == F.zero:
                continue
            for j, y in enumerate(other.coeffs):
                out[i + j] = F.add(out[i + j], F.mul(x, y))
        return Poly(F, out)

    def scale(self, c) -> "Poly":
        return Poly(self.field, [self.field.mul(c, x) for x in self.coeffs])

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        self._same(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        F = self.field
        rem = list(self.coeffs)
        db = other.degree
        inv_lc = F.inv(other.lc)
        if len(rem) <= db:
            return Poly(F), self
        quot = [F.zero] * (len(rem) - db)
        for k in range(len(rem) - 1, db - 1, -1):
            c = rem[k]
            if c == F.zero:
                continue
            c = F.mul(c, inv_lc)
            quot[k - db] = c
            for i, b in enumerate(other.coeffs):
                rem[k - db + i] = F.sub(rem[k - db + i], F.mul(c, b))
        return Poly(F, quot), Poly(F, rem[:db])

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def __pow__(self, n: int) -> "Poly":
        result, base = Poly.one(self.field), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def powmod(self, n: int, modulus: "Poly") -> "Poly":
        result, base = Poly.one(self.field) % modulus, self % modulus
        while n:
            if n & 1:
                result = (result * base) % modulus
            base = (base * base) % modulus
            n >>= 1
        return result

    def __call__(self, a):
        F = self.field
        acc = F.zero
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, a), c)
        return acc

    def derivative(self) -> "Poly":
        F = self.field
        return Poly(F, [F.mul(F.from_int(i), c) for i, c in enumerate(self.coeffs)][1:])

    def map_field(self, target: FiniteField, embed=None) -> "Poly":
        """Coefficients pushed into ``target`` (prime-field residues embedded)."""
        embed = embed or target.from_int
        return Poly(target, [embed(c) for c in self.coeffs])

    def __repr__(self) -> str:
        if self.is_zero():
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == self.field.zero:
                continue
            cs = "" if (c == self.field.one and i) else (str(c) if self.field.d == 1 else "[" + ",".join(map(str, c)) + "]")
            mon = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            terms.append(cs + ("*" if cs and mon else "") + mon)
        return " + ".join(terms)

    def to_ints(self) -> list[int]:
        if self.field.d != 1:
            raise ValueError("integer serialization only for prime fields")
        return list(self.coeffs)


def poly_from_ints(p: int, coeffs: Sequence[int]) -> Poly:
    F = GF(p)
    return Poly(F, [c % p for c in coeffs])


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd (zero if both are zero)."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_xgcd(a: Poly, b: Poly) -> tuple[Poly, Poly, Poly]:
    """(g, s, t) with s*a + t*b = g monic."""
    F = a.field
    r0, r1 = a, b
    s0, s1 = Poly.one(F), Poly(F)
    t0, t1 = Poly(F), Poly.one(F)
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    inv = F.inv(r0.lc)
    return r0.scale(inv), s0.scale(inv), t0.scale(inv)


# ---------------------------------------------------------------------------
# Irreducibility and factorization (Cantor-Zassenhaus)
# ---------------------------------------------------------------------------


def is_irreducible(f: Poly) -> bool:
    """Rabin's test: x^(q^n) = x mod f and gcd(x^(q^(n/r)) - x, f) = 1 for primes r | n."""
    n = f.degree
    if n < 1:
        return False
    if n == 1:
        return True
    F = f.field
    f = f.monic()
    x = Poly.x(F)

    def frob_power(k: int) -> Poly:
        h = x
        for _ in range(k):
            h = h.powmod(F.q, f)
        return h

    if frob_power(n) != x % f:
        return False
    for r in factorint(n):
        if poly_gcd(frob_power(n // r) - x, f).degree != 0:
            return False
    return True


def find_irreducible(p: int, d: int, seed: int = 0) -> Poly:
    """A monic irreducible of degree d over GF(p), drawn from a seeded random search."""
    if d < 1:
        raise ValueError("degree must be >= 1")
    F = GF(p)
    rng = random.Random(f"irreducible:{p}:{d}:{seed}")
    while True:
        f = Poly(F, [rng.randrange(p) for _ in range(d)] + [1])
        if is_irreducible(f):
            return f


def _pth_root(F: FiniteField, a):
    # Frobenius is a bijection; its inverse is a -> a^(q/p)
    return F.pow(a, F.q // F.p)


def squarefree_decomposition(f: Poly) -> list[tuple[Poly, int]]:
    """[(g, m)] with g squarefree, pairwise coprime and f = prod g^m (f monic)."""
    F = f.field
    f = f.monic()
    if f.degree < 1:
        return []
    out: list[tuple[Poly, int]] = []
    df = f.derivative()
    if df.is_zero():
        # f(x) = g(x^p)
        g = Poly(F, [_pth_root(F, c) for c in f.coeffs[:: F.p]])
        return [(h, m * F.p) for h, m in squarefree_decomposition(g)]
    c = poly_gcd(f, df)
    w = f // c
    i = 1
    while w.degree > 0:
        y = poly_gcd(w, c)
        z = w // y
        if z.degree > 0:
            out.append((z.monic(), i))
        i += 1
        w, c = y, c // y
    if c.degree > 0:
        out += [(h, m * F.p) for h, m in squarefree_decomposition(
            Poly(F, [_pth_root(F, cc) for cc in c.coeffs[:: F.p]]))]
    return out


def distinct_degree_factorization(f: Poly) -> list[tuple[Poly, int]]:
    """For squarefree monic f: [(g_d, d)] with g_d the product of all degree-d irreducible factors."""
    F = f.field
    out = []
    x = Poly.x(F)
    h = x % f
    d = 0
    while f.degree >= 2 * (d + 1):
        d += 1
        h = h.powmod(F.q, f)
        g = poly_gcd(h - x, f)
        if g.degree > 0:
            out.append((g, d))
            f = f // g
            h = h % f
    if f.degree > 0:
        out.append((f.monic(), f.degree))
    return out


def equal_degree_split(f: Poly, d: int, rng: random.Random) -> list[Poly]:
    """Split squarefree monic f, a product of degree-d irreducibles, into its factors."""
    F = f.field
    if f.degree == d:
        return [f.monic()]
    if f.degree == 0:
        return []
    n = f.degree
    while True:
        a = Poly(F, [F.random(rng) for _ in range(n)])
        if a.degree < 1:
            continue
        if F.p == 2:
            # trace map T(a) = a + a^2 + ... + a^(2^(e*d - 1)) with q = 2^e
            t, s = a % f, a % f
            for _ in range(F.d * d - 1):
                s = (s * s) % f
                t = t + s
            g = poly_gcd(t, f)
        else:
            g = poly_gcd(a.powmod((F.q**d - 1) // 2, f) - Poly.one(F), f)
        if 0 < g.degree < n:
            return equal_degree_split(g, d, rng) + equal_degree_split(f // g, d, rng)


def factor_poly(f: Poly, seed: int = 0) -> list[tuple[Poly, int]]:
    """Full factorization of a monic polynomial into (irreducible, multiplicity), sorted."""
    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    if not f.is_monic():
        raise ValueError("factor_poly expects a monic polynomial")
    rng = random.Random(seed)
    counts: dict[Poly, int] = {}
    for g, m in squarefree_decomposition(f):
        for gd, d in distinct_degree_factorization(g):
            for h in equal_degree_split(gd, d, rng):
                counts[h] = counts.get(h, 0) + m
    return sorted(counts.items(), key=lambda t: t[0])


def roots_in_splitting_ext(f: Poly, seed: int = 0) -> list[FieldElem]:
    """The d distinct roots of an irreducible f of degree d over GF(p), in ext_field(p, d)."""
    F = f.field
    if not isinstance(F, PrimeField):
        raise ValueError("roots_in_splitting_ext expects a polynomial over a prime field")
    if not is_irreducible(f):
        raise ValueError(f"{f} is reducible over {F}")
    f = f.monic()
    K = ext_field(F.p, f.degree)
    fK = f.map_field(K)
    linear = equal_degree_split(fK, 1, random.Random(seed))
    roots = [K.elem(K.neg(g.coeffs[0])) for g in linear]
    return sorted(roots)
