"""Invariant factors, elementary divisors and explicit conjugators."""
import random

from grpiso.field_poly import GF, poly_from_ints
from grpiso.matrix_forms import (
    block_diag, companion, conjugator, elementary_divisors, invariant_factors, jordan_matrix,
    jordan_power_eds, mat_order, random_invertible,
)

f1 = poly_from_ints(2, [1, 1, 1])  # x^2 + x + 1
f2 = f1 * f1 * poly_from_ints(2, [1, 1, 0, 1])  # (x^2 + x + 1)^2 (x^3 + x + 1)
M = block_diag([companion(f1), companion(f1), companion(f2)])
print(f"{M.r}x{M.r} matrix over GF(2), order", mat_order(M))
print("invariant factors:", [a.to_ints() for a in invariant_factors(M)])
for (d, l), roots in sorted(elementary_divisors(M).items()):
    print(f"  roots of degree-{l} divisors defined over GF(2^{d}): {roots}")

# hide M behind a random change of basis, then recover a conjugator
rng = random.Random(1)
P = random_invertible(GF(2), M.r, rng)
N = P * M * P.inverse()
X = conjugator(M, N)
print("X M = N X:", X * M == N * X)

# powers of a Jordan block keep the block size when k is a unit
lam = GF(7)(3)
print("J(3, 3)^5 divisors:", dict(elementary_divisors(jordan_matrix(lam, 3) ** 5)))
print("predicted:          ", dict(jordan_power_eds(lam, 3, 5)))
