"""The unit interval cut out by the normals s and -t.

For t/s irrational the quotient is a sphere with two non-orbifold cone
points. Walks through the kernel direction, the two charts, their groups,
the transition and one Kempf-Ness projection.
"""

import math

import numpy as np

from quasitoric import atlas as atl, fixtures, kempfness, lattice, moment

s, t = 1.0, math.sqrt(2)
p = fixtures.load("interval", s=s, t=t)
A = atl.build_atlas(p)

# N_C is a line in C^2; its exponents are (Z, (s/t) Z)
b = A.kernel.matrix[:, 0]
print("kernel direction", b, "ratio", b[1] / b[0], "s/t =", s / t)

for c in A:
    print(f"chart at facet {c.active[0] + 1}: vertex {c.vertex.point},",
          "generator phases", [g.phase.tolist() for g in c.gamma_gens],
          "order", lattice.gamma_order(c.gamma_gens))   # None = infinite

# on the universal covers the transition is linear
print("transition slope", atl.transition_matrix(A[0], A[1])[0, 0], "expected", -s / t)

# project (1, 1) onto the level set t|z1|^2 + s|z2|^2 = st
proj = kempfness.project_to_level(p, A.kernel, np.array([1.0, 1.0]))
w = proj.w
print("projected point", w, "after", proj.iterations, "Newton steps")
print("level equation", t * abs(w[0]) ** 2 + s * abs(w[1]) ** 2, "vs st =", s * t)

# the symplectic chart is the disc |w| < sqrt(s); chi lifts it onto C
S = A[0]
for r in (0.0, 0.5, 0.9, 0.99):
    z = kempfness.chi_lift(S, np.array([r]))[0]
    print(f"|w| = {r:4}: chi(w) = {z.real:.6f}")
