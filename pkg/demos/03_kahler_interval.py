"""The Kaehler form of the interval quotient, by finite differences and in
closed form.

In the chart at the first endpoint the form is c(|z|) times the standard
form, where c = A^{p+1} / (A + p^2 x), x = |w|^2 is the symplectic radius
over z and A = t - p x with p = t/s.
"""

import math

import numpy as np

from quasitoric import atlas as atl, fixtures, kahler

s, t = 1.0, math.sqrt(2)
p = fixtures.load("interval", s=s, t=t)
A = atl.build_atlas(p)

for chart, name in zip(A, "SN"):
    print("chart", name)
    for r in (0.0, 0.5, 1.0, 2.0, 5.0):
        Omega, G = kahler.form_matrix(chart, A.kernel, np.array([r + 0j]))
        fd = Omega[0, 1] * np.pi
        closed = kahler.interval_closed_form(name, r, s, t)
        print(f"  |z| = {r:3}: finite differences {fd:.10f}  closed form {closed:.10f}")

# the two cover forms agree under zeta -> -(s/t) zeta
zeta = 0.2 + 0.05j
print(kahler.interval_cover_form("S", zeta, s, t),
      kahler.interval_cover_form("N", -(s / t) * zeta, s, t) * (s / t) ** 2)
