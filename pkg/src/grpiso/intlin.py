"""Integer matrix reductions: column-echelon kernels and Smith normal form with transforms.

Matrices are lists of rows of Python ints; everything is exact.
"""
from __future__ import annotations

from typing import Sequence

Matrix = list[list[int]]

__all__ = ["identity", "matmul", "integer_kernel", "kernel_mod", "smith_normal_form"]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> Matrix:
    cols = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in A]


def integer_kernel(A: Sequence[Sequence[int]], n: int | None = None) -> Matrix:
    """Basis (as a list of vectors) of the lattice {v in Z^n : A v = 0}.

    Unimodular column operations bring A to column echelon form A V = [H | 0];
    the columns of V matching the zero block span the kernel.
    """
    A = [list(r) for r in A]
    if n is None:
        n = len(A[0]) if A else 0
    V = identity(n)
    k = 0
    for row in A:
        while True:
            nz = [j for j in range(k, n) if row[j]]
            if not nz:
                break
            j0 = min(nz, key=lambda j: abs(row[j]))
            if j0 != k:
                for R in A:
                    R[k], R[j0] = R[j0], R[k]
                for R in V:
                    R[k], R[j0] = R[j0], R[k]
            clean = True
            piv = row[k]
            for j in range(k + 1, n):
                if row[j]:
                    q = row[j] // piv
                    if q:
                        for R in A:
                            R[j] -= q * R[k]
                        for R in V:
                            R[j] -= q * R[k]
                    if row[j]:
                        clean = False
            if clean:
                break
        if k < n and row[k]:
            k += 1
    return [[V[i][j] for i in range(n)] for j in range(k, n)]


def kernel_mod(images: Sequence[Sequence[int]], moduli: Sequence[int],
               domain_orders: Sequence[int] | None = None) -> Matrix:
    """Generators of {c : sum_j c_j * images[j] = 0 in prod Z_{moduli}}.

    ``images[j]`` is the image vector of the j-th domain generator. When
    ``domain_orders`` is given the result is reduced into prod Z_{domain_orders}.
    """
    t = len(images)
    r = len(moduli)
    # columns: the t domain generators, then one column per modulus relation
    A = [[images[j][i] for j in range(t)] + [moduli[i] if k == i else 0 for k in range(r)]
         for i in range(r)]
    if r == 0:
        basis = identity(t)
    else:
        basis = [v[:t] for v in integer_kernel(A, t + r)]
    if domain_orders is not None:
        basis = [[c % o for c, o in zip(v, domain_orders)] for v in basis]
    return [v for v in basis if any(v)]


def smith_normal_form(A: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix, Matrix]:
    """(U, D, V, Vinv) with U A V = D diagonal, d_1 | d_2 | ..., d_i >= 0; U, V unimodular."""
    D = [list(r) for r in A]
    m = len(D)
    n = len(D[0]) if m else 0
    U, V, Vi = identity(m), identity(n), identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for R in D:
            R[i], R[j] = R[j], R[i]
        for R in V:
            R[i], R[j] = R[j], R[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_row(dst, src, q):  # row_dst += q row_src
        D[dst] = [a + q * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col_dst += q col_src
        for R in D:
            R[dst] += q * R[src]
        for R in V:
            R[dst] += q * R[src]
        Vi[src] = [a - q * b for a, b in zip(Vi[src], Vi[dst])]

    for t in range(min(m, n)):
        while True:
            cells = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
            if not cells:
                break
            _, i0, j0 = min(cells)
            swap_rows(t, i0)
            swap_cols(t, j0)
            piv = D[t][t]
            dirty = False
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // piv))
                    dirty |= D[i][t] != 0
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // piv))
                    dirty |= D[t][j] != 0
            if dirty:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if D[i][j] % piv), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if t < m and t < n and D[t][t] < 0:
            D[t] = [-a for a in D[t]]
            U[t] = [-a for a in U[t]]
    return U, D, V, Vi
