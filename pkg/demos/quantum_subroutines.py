"""Simulated order finding and abelian hidden subgroup recovery."""
import random

from grpiso.quantum_sim import hsp_recover, hsp_sample, shor_order

rng = random.Random(2024)
transcript = []
r = shor_order(7, 55, rng, transcript=transcript)
for step in transcript:
    print(f"measured {step['measured']}/{step['Q']} -> candidate {step['candidate']}")
print("order of 7 mod 55:", r, "check:", pow(7, r, 55))

# hide K = <(2, 3)> inside Z_4 x Z_6 behind a coset-labelling function
orders = (4, 6)


def label(x):
    coset = {tuple((a + t * 2) % 4 for a in x[:1]) + tuple((b + t * 3) % 6 for b in x[1:]) for t in range(12)}
    return min(coset)


print("a few Fourier samples:", [hsp_sample(orders, label, rng) for _ in range(4)])
print("recovered generators of K:", hsp_recover(orders, label, rng))
