import itertools
import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from grpiso.field_poly import GF, FieldElem, Poly, ext_field, poly_from_ints
from grpiso.matrix_forms import (
    EDTable, Matrix, MatrixError, NotSimilar, block_diag, companion, conjugator, elementary_divisors,
    invariant_factors, jordan_matrix, jordan_power_eds, mat_order, random_invertible, similar,
)


def _naive_order(M, cap=10**5):
    P, k = M, 1
    while not P.is_identity():
        P, k = P * M, k + 1
        assert k < cap
    return k


def test_companion_examples():
    assert companion(poly_from_ints(7, [-3, 1])).to_ints() == [[3]]
    assert companion(poly_from_ints(2, [1, 1, 1])).to_ints() == [[0, 1], [1, 1]]
    b = [2, 3, 4, 1]
    C = companion(poly_from_ints(5, b + [1])).to_ints()
    assert C == [[0, 0, 0, 3], [1, 0, 0, 2], [0, 1, 0, 1], [0, 0, 1, 4]]
    with pytest.raises(MatrixError):
        companion(Poly(GF(5), [1, 2]))


def test_invariant_factor_examples():
    F = GF(3)
    I3 = Matrix.identity(F, 3)
    assert [a.to_ints() for a in invariant_factors(I3)] == [[2, 1]] * 3
    f = poly_from_ints(5, [2, 0, 1, 1])
    assert [a.to_ints() for a in invariant_factors(companion(f))] == [f.to_ints()]
    with pytest.raises(MatrixError):
        invariant_factors(Matrix.from_ints(3, [[1, 1], [1, 1]]))


def test_elementary_divisor_examples():
    assert elementary_divisors(Matrix.identity(GF(3), 2)).normalized() == {(1, 1): [FieldElem(GF(3), 1)] * 2}
    J = Matrix.from_ints(3, [[1, 1], [0, 1]])
    assert elementary_divisors(J).normalized() == {(1, 2): [FieldElem(GF(3), 1)]}


def test_similar_examples():
    I2 = Matrix.identity(GF(3), 2)
    J = Matrix.from_ints(3, [[1, 1], [0, 1]])
    assert similar(J, J) and not similar(I2, J)
    with pytest.raises(MatrixError):
        similar(I2, Matrix.identity(GF(5), 2))


def test_conjugator_examples():
    rng = random.Random(5)
    M = random_invertible(GF(5), 3, rng)
    X = conjugator(M, M)
    assert X.is_invertible() and X * M == M * X
    C = companion(poly_from_ints(3, [1, 2, 0, 1]))
    X = conjugator(C, C.transpose())
    assert X.is_invertible() and X * C == C.transpose() * X
    with pytest.raises(NotSimilar):
        conjugator(Matrix.identity(GF(3), 2), Matrix.from_ints(3, [[1, 1], [0, 1]]))


def test_mat_order_examples():
    assert mat_order(Matrix.identity(GF(7), 3)) == 1
    assert mat_order(Matrix.from_ints(3, [[0, 2], [1, 0]])) == 4
    assert mat_order(companion(poly_from_ints(2, [1, 1, 1]))) == 3


def test_jordan_power_examples():
    F3 = GF(3)
    one = FieldElem(F3, 1)
    assert mat_order(jordan_matrix(one, 3)) == 3
    assert jordan_power_eds(one, 3, 2) == {(1, 3): [one]}
    assert elementary_divisors(jordan_matrix(one, 3) ** 2) == {(1, 3): [one]}
    F4 = ext_field(2, 2)
    a = next(FieldElem(F4, r) for r in F4.elements() if FieldElem(F4, r) and FieldElem(F4, r).mult_order() == 3)
    assert jordan_power_eds(a, 2, 5) == {(2, 2): [a ** 2]}
    assert elementary_divisors(jordan_matrix(a, 2) ** 5) == {(2, 2): [a ** 2]}
    lam = FieldElem(GF(7), 3)
    assert jordan_power_eds(lam, 1, 5) == {(1, 1): [lam ** 5]}
    with pytest.raises(ValueError):
        jordan_power_eds(one, 3, 3)


def _random_chain(p, rng, max_deg=8):
    """A random divisibility chain of monic polynomials with nonzero constant terms."""
    F = GF(p)

    def rand_factor(d):
        while True:
            c = [rng.randrange(p) for _ in range(d)] + [1]
            if c[0]:
                return Poly(F, c)
    total = rng.randint(1, max_deg)
    chain = [rand_factor(rng.randint(1, total))]
    deg = chain[0].degree
    while rng.random() < 0.6:
        nxt_deg = chain[-1].degree
        extra = rng.randint(0, 2)
        if deg + nxt_deg + extra > max_deg:
            break
        nxt = chain[-1] * rand_factor(extra) if extra else chain[-1]
        chain.append(nxt)
        deg += nxt.degree
    return chain


def test_invariant_factor_round_trip():
    rng = random.Random(11)
    for _ in range(200):
        p = rng.choice([2, 3, 5])
        chain = _random_chain(p, rng)
        M = block_diag([companion(a) for a in chain])
        P = random_invertible(GF(p), M.r, rng)
        got = invariant_factors(P * M * P.inverse())
        assert [a.to_ints() for a in got] == [a.to_ints() for a in chain]


def _gl(p, r):
    F = GF(p)
    out = []
    for entries in itertools.product(range(p), repeat=r * r):
        M = Matrix.from_ints(F, [list(entries[i * r:(i + 1) * r]) for i in range(r)])
        if M.is_invertible():
            out.append(M)
    return out


def test_similar_matches_exhaustive_gl22():
    G = _gl(2, 2)
    assert len(G) == 6
    for A, B in itertools.product(G, repeat=2):
        brute = any(X * A * X.inverse() == B for X in G)
        assert similar(A, B) == brute


def test_similar_matches_exhaustive_gl23_sample():
    G = _gl(3, 2)
    assert len(G) == 48
    rng = random.Random(2)
    for _ in range(150):
        A, B = rng.choice(G), rng.choice(G)
        if rng.random() < 0.3:
            X = rng.choice(G)
            B = X * A * X.inverse()
        brute = any(X * A == B * X for X in G)
        assert similar(A, B) == brute


@settings(max_examples=150, deadline=None)
@given(st.sampled_from([2, 3, 5, 7]), st.integers(1, 4), st.integers(0, 10**6))
def test_power_permutes_elementary_divisors(p, r, seed):
    rng = random.Random(seed)
    M = random_invertible(GF(p), r, rng)
    o = mat_order(M)
    k = rng.choice([k for k in range(1, 2 * o + 2) if math.gcd(k, o) == 1])
    ed = elementary_divisors(M)
    assert ed.degree_sum() == r
    assert elementary_divisors(M ** k) == ed.power(k)


@settings(max_examples=150, deadline=None)
@given(st.sampled_from([2, 3, 5]), st.integers(1, 5), st.integers(0, 10**6))
def test_conjugator_post_condition(p, r, seed):
    rng = random.Random(seed)
    F = GF(p)
    M = random_invertible(F, r, rng)
    P = random_invertible(F, r, rng)
    N = P * M * P.inverse()
    assert similar(M, N)
    X = conjugator(M, N)
    assert X.is_invertible() and X * M == N * X


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([2, 3, 5]), st.integers(1, 4), st.integers(0, 10**6))
def test_mat_order_matches_powering(p, r, seed):
    M = random_invertible(GF(p), r, random.Random(seed))
    assert mat_order(M) == _naive_order(M)


def test_edtable_ignores_empty_buckets():
    a = EDTable({(1, 1): [FieldElem(GF(3), 1)], (2, 1): []})
    assert a == {(1, 1): [FieldElem(GF(3), 1)]}
