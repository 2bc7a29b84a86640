"""Sort random (Z_3)^4 x| Z_4 groups into isomorphism classes.

The full census uses 200 specs and takes about a minute; pass a count to change it.
"""
import random
import sys

from grpiso.blackbox import build_group
from grpiso.corpus import census_specs
from grpiso.iso import group_isomorphism

count = int(sys.argv[1]) if len(sys.argv) > 1 else 40
specs = census_specs(count, random.Random(0))
groups = [build_group(s) for s in specs]
reps: list[int] = []
sizes: list[int] = []
for i, G in enumerate(groups):
    for c, j in enumerate(reps):
        if group_isomorphism(groups[j], G).isomorphic:
            sizes[c] += 1
            break
    else:
        reps.append(i)
        sizes.append(1)
print(f"{len(specs)} groups, {len(reps)} classes")
for c, (j, n) in enumerate(zip(reps, sizes)):
    print(f"  class {c}: {n} members, representative action {specs[j].action}")
