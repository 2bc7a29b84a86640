"""Finite fields, irreducible polynomials and factoring over GF(p)."""
from grpiso.field_poly import ext_field, factor_poly, find_irreducible, poly_from_ints

# GF(16) built from the package's canonical degree-4 modulus
F = ext_field(2, 4)
g = F.elem(F.gen())
print("GF(16) modulus (lowest degree first):", F.modulus)
print("order of x in GF(16)^*:", g.mult_order())
print("x^15 =", g ** 15)

# a random irreducible of degree 5 over GF(3), reproducible from its seed
f = find_irreducible(3, 5, seed=7)
print("irreducible over GF(3):", f.to_ints())

# x^8 - 1 over GF(3) splits into cyclotomic pieces
h = poly_from_ints(3, [-1] + [0] * 7 + [1])
for fac, e in factor_poly(h):
    print(f"  factor {fac.to_ints()} ^ {e}")
