"""Black-box groups A x| Z_m: standard decompositions and isomorphism certificates."""
import random

from grpiso.blackbox import build_group
from grpiso.corpus import isomorphic_copy, random_spec
from grpiso.decompose import standard_decompose
from grpiso.iso import group_isomorphism, verify_isomorphism

rng = random.Random(5)
spec = random_spec([3, 3, 9], 4, rng, scramble_seed=11)
G = build_group(spec)
sd = standard_decompose(G)
print("|G| =", spec.order, " |A| =", sd.A_order(G), " |v| =", sd.m)

# an isomorphic presentation with a different basis, exponent and encoding
H = build_group(isomorphic_copy(spec, rng))
res = group_isomorphism(G, H)
print(res.verdict, "-", res.reason)
print("certificate verifies:", verify_isomorphism(G, H, res.iso))
print("generator images:", [h.hex() for h in res.iso.gen_images])

# a second random action on the same A is usually a different group
K = build_group(random_spec([3, 3, 9], 4, rng, scramble_seed=12))
res = group_isomorphism(G, K)
print(res.verdict, "-", res.reason)
