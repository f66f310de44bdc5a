"""Global numerical defaults.

Every routine takes its tolerance as a keyword argument; these constants are
only the defaults.
"""

# "is this facet active" / "is this coordinate zero"
EPS_GEOM = 1e-9
# residuals of linear-algebra identities (kernel, inverse isomorphisms)
EPS_LIN = 1e-10
# Kempf-Ness solver: stop once the moment map residual is below this
TOL_PSI = 1e-10
# central finite-difference step
H_FD = 1e-6
# bound on each integer coefficient when searching for chart-group words
SEARCH_RADIUS = 3
