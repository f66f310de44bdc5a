"""The regular pentagon: five charts, each modelled on C^2 modulo a dense
group generated by three rotations."""

import math

import numpy as np

from quasitoric import atlas as atl, fixtures, lattice

p = fixtures.load("pentagon")
A = atl.build_atlas(p)
a = math.cos(2 * math.pi / 5)

for c in A:
    facets = [j + 1 for j in c.active]
    phases = np.array([g.phase for g in c.gamma_gens])
    print(f"chart {c.index + 1}, facets {facets}: {len(phases)} generators")
    print(np.round(phases, 6))

# at the vertex on facets 4 and 5, X_1 = -X_4 + 2a X_5
c = next(c for c in A if c.active == (3, 4))
print("pi_mu^-1(X_1) =", c.iso_inverse(p.normals[0]), " 2a =", 2 * a)

# phases mod 1 are dense, so the group is infinite
print("orders:", [lattice.gamma_order(c.gamma_gens) for c in A])

# cocycle check on a few triples
rng = np.random.default_rng(0)
worst = 0.0
for i, j, k in [(0, 1, 2), (1, 3, 4), (4, 2, 0)]:
    s = np.exp(0.5 * rng.normal(size=2)) * np.exp(2j * np.pi * rng.random(2))
    worst = max(worst, atl.cocycle_residual(A, i, j, k, s))
print("largest cocycle residual", worst)
