"""Invertible matrices over finite fields: invariant factors, elementary-divisor
tables, similarity and explicit conjugators.

Entries are stored as raw field values (ints for prime fields, coefficient
tuples for extensions); :meth:`Matrix.entry` wraps them as ``FieldElem``.
"""
from __future__ import annotations

import math
from typing import Iterable, Sequence

from .field_poly import FieldElem, FiniteField, GF, Poly, factor_poly, minimal_subfield_degree, mult_order
from .numtheory import lcm_list

__all__ = [
    "MatrixError", "NotSimilar", "Matrix", "EDTable", "companion", "block_diag",
    "invariant_factors", "elementary_divisors", "similar", "conjugator", "mat_order",
    "jordan_matrix", "jordan_power_eds", "rcf_basis", "random_invertible",
]


class MatrixError(ValueError):
    pass


class NotSimilar(MatrixError):
    pass


class Matrix:
    """Square matrix over a finite field (immutable)."""

    __slots__ = ("field", "r", "rows", "_hash")

    def __init__(self, field: FiniteField, rows: Iterable[Iterable]):
        self.field = field
        self.rows = tuple(tuple(row) for row in rows)
        self.r = len(self.rows)
        if any(len(row) != self.r for row in self.rows):
            raise MatrixError("matrix must be square")
        self._hash = None

    # -- constructors ------------------------------------------------------
    @classmethod
    def from_ints(cls, field: FiniteField | int, rows: Sequence[Sequence]) -> "Matrix":
        F = GF(field) if isinstance(field, int) else field
        conv = (lambda v: F.from_int(v)) if F.d == 1 else (lambda v: F.from_int(v) if isinstance(v, int) else F.coerce(v))
        return cls(F, [[conv(v) for v in row] for row in rows])

    @classmethod
    def from_elems(cls, rows: Sequence[Sequence[FieldElem]]) -> "Matrix":
        F = rows[0][0].field
        return cls(F, [[e.raw for e in row] for row in rows])

    @classmethod
    def identity(cls, field: FiniteField, r: int) -> "Matrix":
        return cls(field, [[field.one if i == j else field.zero for j in range(r)] for i in range(r)])

    @classmethod
    def zero(cls, field: FiniteField, r: int) -> "Matrix":
        return cls(field, [[field.zero] * r for _ in range(r)])

    # -- basics ------------------------------------------------------------
    def entry(self, i: int, j: int) -> FieldElem:
        return FieldElem(self.field, self.rows[i][j])

    def to_ints(self) -> list[list]:
        if self.field.d == 1:
            return [list(row) for row in self.rows]
        return [[list(v) for v in row] for row in self.rows]

    def __eq__(self, other) -> bool:
        return isinstance(other, Matrix) and self.field == other.field and self.rows == other.rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.rows)
        return self._hash

    def __repr__(self) -> str:
        return f"Matrix(GF({self.field.q}), {self.to_ints()})"

    def _same(self, other: "Matrix") -> None:
        if self.field != other.field or self.r != other.r:
            raise MatrixError("dimension or field mismatch")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same(other)
        add = self.field.add
        return Matrix(self.field, [[add(a, b) for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same(other)
        sub = self.field.sub
        return Matrix(self.field, [[sub(a, b) for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)])

    def __mul__(self, other: "Matrix") -> "Matrix":
        self._same(other)
        return Matrix(self.field, _mat_mul(self.field, self.rows, other.rows))

    def scale(self, c) -> "Matrix":
        mul = self.field.mul
        return Matrix(self.field, [[mul(c, a) for a in row] for row in self.rows])

    def __pow__(self, n: int) -> "Matrix":
        base = self.inverse() if n < 0 else self
        n = abs(n)
        result = Matrix.identity(self.field, self.r)
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def transpose(self) -> "Matrix":
        return Matrix(self.field, list(zip(*self.rows)) if self.r else [])

    def apply(self, vec: Sequence) -> list:
        F = self.field
        out = []
        for row in self.rows:
            acc = F.zero
            for a, b in zip(row, vec):
                if a != F.zero and b != F.zero:
                    acc = F.add(acc, F.mul(a, b))
            out.append(acc)
        return out

    def det(self) -> object:
        F = self.field
        A = [list(row) for row in self.rows]
        n = self.r
        det = F.one
        for c in range(n):
            piv = next((i for i in range(c, n) if A[i][c] != F.zero), None)
            if piv is None:
                return F.zero
            if piv != c:
                A[c], A[piv] = A[piv], A[c]
                det = F.neg(det)
            det = F.mul(det, A[c][c])
            inv = F.inv(A[c][c])
            for i in range(c + 1, n):
                if A[i][c] != F.zero:
                    f = F.mul(A[i][c], inv)
                    A[i] = [F.sub(a, F.mul(f, b)) for a, b in zip(A[i], A[c])]
        return det

    def is_invertible(self) -> bool:
        return self.det() != self.field.zero

    def inverse(self) -> "Matrix":
        F = self.field
        n = self.r
        A = [list(row) + [F.one if i == j else F.zero for j in range(n)] for i, row in enumerate(self.rows)]
        R = _rref(F, A, n)
        if R is None:
            raise MatrixError("matrix is singular")
        return Matrix(F, [row[n:] for row in R])

    def is_identity(self) -> bool:
        F = self.field
        return all(v == (F.one if i == j else F.zero) for i, row in enumerate(self.rows) for j, v in enumerate(row))

    def char_poly_matrix(self) -> list[list[Poly]]:
        """xI - M as a matrix of polynomials."""
        F = self.field
        return [[Poly(F, [F.neg(v), F.one] if i == j else [F.neg(v)]) for j, v in enumerate(row)]
                for i, row in enumerate(self.rows)]


def _mat_mul(F: FiniteField, A, B) -> list[list]:
    zero = F.zero
    cols = list(zip(*B))
    out = []
    for row in A:
        new = []
        for col in cols:
            acc = zero
            for a, b in zip(row, col):
                if a != zero and b != zero:
                    acc = F.add(acc, F.mul(a, b))
            new.append(acc)
        out.append(new)
    return out


def _rref(F: FiniteField, A: list[list], ncols: int) -> list[list] | None:
    """Gauss-Jordan on the first ``ncols`` columns; None if they are rank deficient."""
    n = len(A)
    for c in range(ncols):
        piv = next((i for i in range(c, n) if A[i][c] != F.zero), None)
        if piv is None:
            return None
        A[c], A[piv] = A[piv], A[c]
        inv = F.inv(A[c][c])
        A[c] = [F.mul(inv, a) for a in A[c]]
        for i in range(n):
            if i != c and A[i][c] != F.zero:
                f = A[i][c]
                A[i] = [F.sub(a, F.mul(f, b)) for a, b in zip(A[i], A[c])]
    return A


def _nullspace(F: FiniteField, rows: Sequence[Sequence], n: int) -> list[list]:
    """Basis of {u in F^n : row . u = 0 for every row}."""
    A = [list(r) for r in rows]
    pivots: list[int] = []
    rank = 0
    for c in range(n):
        piv = next((i for i in range(rank, len(A)) if A[i][c] != F.zero), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        inv = F.inv(A[rank][c])
        A[rank] = [F.mul(inv, a) for a in A[rank]]
        for i in range(len(A)):
            if i != rank and A[i][c] != F.zero:
                f = A[i][c]
                A[i] = [F.sub(a, F.mul(f, b)) for a, b in zip(A[i], A[rank])]
        pivots.append(c)
        rank += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fcol in free:
        u = [F.zero] * n
        u[fcol] = F.one
        for i, pc in enumerate(pivots):
            u[pc] = F.neg(A[i][fcol])
        basis.append(u)
    return basis


def _solve(F: FiniteField, cols: Sequence[Sequence], target: Sequence) -> list:
    """Coefficients c with sum c_j cols[j] = target (cols linearly independent)."""
    n = len(target)
    k = len(cols)
    A = [[cols[j][i] for j in range(k)] + [target[i]] for i in range(n)]
    row = 0
    where = [-1] * k
    for c in range(k):
        piv = next((i for i in range(row, n) if A[i][c] != F.zero), None)
        if piv is None:
            continue
        A[row], A[piv] = A[piv], A[row]
        inv = F.inv(A[row][c])
        A[row] = [F.mul(inv, a) for a in A[row]]
        for i in range(n):
            if i != row and A[i][c] != F.zero:
                f = A[i][c]
                A[i] = [F.sub(a, F.mul(f, b)) for a, b in zip(A[i], A[row])]
        where[c] = row
        row += 1
    if any(A[i][k] != F.zero for i in range(row, n)):
        raise MatrixError("target not in the span")
    return [A[where[c]][k] if where[c] >= 0 else F.zero for c in range(k)]


# ---------------------------------------------------------------------------
# Companions and invariant factors
# ---------------------------------------------------------------------------


def companion(a: Poly) -> Matrix:
    """Companion matrix: ones on the first subdiagonal, last column -b_0, ..., -b_{n-1}."""
    F = a.field
    if a.degree < 1:
        raise MatrixError("companion needs a polynomial of degree >= 1")
    if not a.is_monic():
        raise MatrixError("companion needs a monic polynomial")
    n = a.degree
    rows = [[F.zero] * n for _ in range(n)]
    for i in range(1, n):
        rows[i][i - 1] = F.one
    for i in range(n):
        rows[i][n - 1] = F.neg(a.coeffs[i]) if i < len(a.coeffs) else F.zero
    return Matrix(F, rows)


def block_diag(blocks: Sequence[Matrix]) -> Matrix:
    F = blocks[0].field
    n = sum(b.r for b in blocks)
    rows = [[F.zero] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i in range(b.r):
            for j in range(b.r):
                rows[off + i][off + j] = b.rows[i][j]
        off += b.r
    return Matrix(F, rows)


def _require_invertible(M: Matrix) -> None:
    if not M.is_invertible():
        raise MatrixError("matrix is singular")


def _poly_smith_diagonal(P: list[list[Poly]]) -> list[Poly]:
    """Monic diagonal of the Smith form of a square polynomial matrix with nonzero determinant."""
    n = len(P)
    for t in range(n):
        while True:
            cells = [(P[i][j].degree, i, j) for i in range(t, n) for j in range(t, n) if not P[i][j].is_zero()]
            if not cells:
                raise MatrixError("polynomial matrix is singular")
            _, i0, j0 = min(cells)
            P[t], P[i0] = P[i0], P[t]
            for row in P:
                row[t], row[j0] = row[j0], row[t]
            piv = P[t][t]
            dirty = False
            for i in range(t + 1, n):
                if not P[i][t].is_zero():
                    q = P[i][t] // piv
                    P[i] = [a - q * b for a, b in zip(P[i], P[t])]
                    dirty |= not P[i][t].is_zero()
            for j in range(t + 1, n):
                if not P[t][j].is_zero():
                    q = P[t][j] // piv
                    for row in P:
                        row[j] = row[j] - q * row[t]
                    dirty |= not P[t][j].is_zero()
            if dirty:
                continue
            bad = next((i for i in range(t + 1, n) for j in range(t + 1, n)
                        if not (P[i][j] % piv).is_zero()), None)
            if bad is None:
                break
            P[t] = [a + b for a, b in zip(P[t], P[bad])]
    return [P[i][i].monic() for i in range(n)]


def invariant_factors(M: Matrix) -> list[Poly]:
    """Monic a_1 | a_2 | ... | a_s with M similar to diag(C_{a_1}, ..., C_{a_s})."""
    _require_invertible(M)
    if M.r == 0:
        return []
    diag = _poly_smith_diagonal(M.char_poly_matrix())
    facs = [f for f in diag if f.degree > 0]
    facs.sort(key=lambda f: f.degree)
    for a, b in zip(facs, facs[1:]):
        assert (b % a).is_zero(), "Smith diagonal lost the divisibility chain"
    return facs


# ---------------------------------------------------------------------------
# Elementary divisors
# ---------------------------------------------------------------------------


class EDTable(dict):
    """(d, l) -> sorted list of roots; (x - lambda)^l is an elementary divisor over GF(p^d)."""

    def degree_sum(self) -> int:
        return sum(ell * len(v) for (_, ell), v in self.items())

    def power(self, k: int) -> "EDTable":
        out = EDTable()
        for key, lams in self.items():
            out[key] = sorted(lam ** k for lam in lams)
        return out

    def normalized(self) -> "EDTable":
        return EDTable({k: sorted(v) for k, v in self.items() if v})

    def __eq__(self, other) -> bool:
        if not isinstance(other, dict):
            return NotImplemented
        a = {k: sorted(v) for k, v in self.items() if v}
        b = {k: sorted(v) for k, v in other.items() if v}
        return a == b

    __hash__ = None


def _roots(g: Poly, seed: int = 0) -> list[FieldElem]:
    """The deg(g) roots of an irreducible g, in the canonical field where they live."""
    F = g.field
    if g.degree == 1:
        lam = FieldElem(F, F.neg(g.coeffs[0]))
        return [_canonical(lam)]
    if F.d != 1:
        raise MatrixError("non-linear elementary divisors are only supported over prime fields")
    from .field_poly import roots_in_splitting_ext
    return roots_in_splitting_ext(g, seed)


def _canonical(lam: FieldElem) -> FieldElem:
    # scalars of an extension base field that lie in the prime field are reported there
    if lam.field.d > 1 and minimal_subfield_degree(lam) == 1:
        return FieldElem(GF(lam.field.p), lam.coeffs[0])
    return lam


def _root_degree(lam: FieldElem) -> int:
    return minimal_subfield_degree(lam)


def elementary_divisors(M: Matrix) -> EDTable:
    table = EDTable()
    for a in invariant_factors(M):
        for g, c in factor_poly(a):
            for lam in _roots(g):
                table.setdefault((_root_degree(lam), c), []).append(lam)
    for k in table:
        table[k].sort()
    return table


def similar(M1: Matrix, M2: Matrix) -> bool:
    M1._same(M2)
    return invariant_factors(M1) == invariant_factors(M2)


# ---------------------------------------------------------------------------
# Rational canonical bases and conjugators
# ---------------------------------------------------------------------------


def _poly_apply(N: Matrix, f: Poly, v: Sequence) -> list:
    """f(N) v by Horner."""
    F = N.field
    acc = [F.zero] * N.r
    for c in reversed(f.coeffs):
        acc = N.apply(acc)
        acc = [F.add(a, F.mul(c, b)) for a, b in zip(acc, v)]
    return acc


def _cyclic_vector(N: Matrix, a: Poly) -> list:
    """A vector whose N-annihilator is exactly the minimal polynomial a."""
    F = N.field
    n = N.r
    basis = [[F.one if i == j else F.zero for i in range(n)] for j in range(n)]
    total = [F.zero] * n
    for g, e in factor_poly(a):
        ge = g ** e
        cof = a // ge
        drop = a // g
        for b in basis:
            if any(x != F.zero for x in _poly_apply(N, drop, b)):
                w = _poly_apply(N, cof, b)
                total = [F.add(x, y) for x, y in zip(total, w)]
                break
        else:
            raise AssertionError("minimal polynomial is not minimal")
    return total


def rcf_basis(M: Matrix) -> tuple[Matrix, list[Poly]]:
    """(P, factors) with P^-1 M P = diag(C_{a_s}, ..., C_{a_1}), largest factor first."""
    F = M.field
    n = M.r
    if n == 0:
        return Matrix(F, []), []
    a = invariant_factors(M)[-1]
    v = _cyclic_vector(M, a)
    d = a.degree
    krylov = [v]
    for _ in range(d - 1):
        krylov.append(M.apply(krylov[-1]))
    if d == n:
        cols, facs = krylov, [a]
    else:
        # functional phi with phi(M^j v) = [j == d-1]; its M-orbit cuts out an invariant complement
        K = [[krylov[j][i] for j in range(d)] for i in range(n)]
        phi_basis = _nullspace(F, [list(col) for col in krylov[:d - 1]], n)
        phi = next(u for u in phi_basis if _dot(F, u, krylov[d - 1]) != F.zero)
        scale = F.inv(_dot(F, phi, krylov[d - 1]))
        phi = [F.mul(scale, x) for x in phi]
        Mt = M.transpose()
        rows = [phi]
        for _ in range(d - 1):
            rows.append(Mt.apply(rows[-1]))
        W = _nullspace(F, rows, n)
        assert len(W) == n - d and K
        # restriction of M to span(W) in the basis W
        sub = [_solve(F, W, M.apply(w)) for w in W]
        N = Matrix(F, [[sub[j][i] for j in range(len(W))] for i in range(len(W))])
        P_sub, facs_sub = rcf_basis(N)
        lifted = []
        for j in range(len(W)):
            col = [P_sub.rows[i][j] for i in range(len(W))]
            lifted.append([_dot(F, [W[t][row] for t in range(len(W))], col) for row in range(n)])
        cols, facs = krylov + lifted, [a] + facs_sub
    P = Matrix(F, [[cols[j][i] for j in range(n)] for i in range(n)])
    return P, facs


def _dot(F: FiniteField, u: Sequence, v: Sequence):
    acc = F.zero
    for a, b in zip(u, v):
        acc = F.add(acc, F.mul(a, b))
    return acc


def conjugator(M1: Matrix, M2: Matrix) -> Matrix:
    """Invertible X with X M1 = M2 X."""
    M1._same(M2)
    if not similar(M1, M2):
        raise NotSimilar("matrices are not similar")
    P1, _ = rcf_basis(M1)
    P2, _ = rcf_basis(M2)
    X = P2 * P1.inverse()
    if X * M1 != M2 * X:
        raise AssertionError("conjugator failed verification")
    return X


# ---------------------------------------------------------------------------
# Orders and Jordan blocks
# ---------------------------------------------------------------------------


def _ppow_ceil(p: int, c: int) -> int:
    t = 1
    while t < c:
        t *= p
    return t


def mat_order(M: Matrix, cap: int = 10**7) -> int:
    """Smallest m >= 1 with M^m = I."""
    _require_invertible(M)
    if M.r == 0:
        return 1
    p = M.field.p
    m = lcm_list(mult_order(lam) * _ppow_ceil(p, ell)
                 for (_, ell), lams in elementary_divisors(M).items() for lam in lams)
    if (M ** m).is_identity():
        for q in set(_prime_divs(m)):
            while m % q == 0 and (M ** (m // q)).is_identity():
                m //= q
        return m
    # fallback: direct powering
    P = M
    for k in range(1, cap + 1):
        if P.is_identity():
            return k
        P = P * M
    raise MatrixError("order exceeds the powering cap")


def _prime_divs(n: int) -> list[int]:
    from .numtheory import prime_factors
    return prime_factors(n) if n > 1 else []


def jordan_matrix(lam: FieldElem, c: int) -> Matrix:
    """J(lambda, c): lambda on the diagonal, ones on the superdiagonal."""
    F = lam.field
    rows = [[lam.raw if i == j else (F.one if j == i + 1 else F.zero) for j in range(c)] for i in range(c)]
    return Matrix(F, rows)


def jordan_power_eds(lam: FieldElem, c: int, k: int) -> EDTable:
    """Elementary divisors of J(lambda, c)^k for k coprime with the order of J(lambda, c)."""
    if lam == 0:
        raise MatrixError("lambda must be nonzero")
    order = mult_order(lam) * _ppow_ceil(lam.field.p, c)
    if math.gcd(k, order) != 1:
        raise MatrixError(f"k = {k} is not coprime with the order {order} of J(lambda, {c})")
    mu = _canonical(lam ** k)
    return EDTable({(_root_degree(mu), c): [mu]})


def random_invertible(F: FiniteField, r: int, rng) -> Matrix:
    while True:
        M = Matrix(F, [[F.random(rng) for _ in range(r)] for _ in range(r)])
        if M.is_invertible():
            return M
