"""Moment maps and the symplectic vertex charts.

``J(z)_j = |z_j|^2 + lambda_j`` is the moment map of the standard torus action
on ``C^d``; ``Psi = B^T J`` is the moment map of ``N``, written in the same
kernel basis ``B`` used everywhere else so that pairings are dot products.
"""

import numpy as np

from .config import EPS_GEOM
from .errors import ChartDomainError, ValidationError
from .polytope import face_of_point


def moment_J(p, z):
    z = np.asarray(z)
    return np.abs(z) ** 2 + p.offsets


def moment_Psi(p, kernel, z):
    """``Psi(z) = B^T J(z)``; vanishes exactly on the level set."""
    return kernel.matrix.T @ moment_J(p, z)


def level_point_from_polytope(p, zeta, phases=None):
    """The point with ``|z_j|^2 = <zeta, X_j> - lambda_j`` and angles
    ``2 pi phases_j``. Its moment map image is ``zeta``, so it lies on the
    zero level of ``Psi``. Slacks at roundoff level count as zero, so a vertex
    gives exact zeros on its facets without moving interior points."""
    zeta = np.asarray(zeta, dtype=float)
    if not p.contains(zeta):
        raise ValidationError("point lies outside the polytope", field="zeta")
    r2 = p.slack(zeta)
    scale = np.abs(p.normals @ zeta).max(initial=0.0) + np.abs(p.offsets).max()
    r2[r2 <= 64 * np.finfo(float).eps * max(scale, 1.0)] = 0.0
    phases = np.zeros(p.d) if phases is None else np.asarray(phases, dtype=float)
    return np.sqrt(r2) * np.exp(2j * np.pi * phases)


def level_face(p, zeta):
    """Index set of the orbit containing ``level_point_from_polytope(zeta)``."""
    return face_of_point(p, zeta)


def pad_values(chart, w):
    """``A_h = sum_j a_jh (|w_j|^2 + lambda_j) - lambda_h`` for ``h`` off the
    vertex, in the order of ``chart.off``."""
    p = chart.polytope
    I, off = list(chart.active), list(chart.off)
    t = np.abs(np.asarray(w)) ** 2 + p.offsets[I]
    return t @ chart.a[:, off] - p.offsets[off]


def in_symplectic_chart(chart, w, eps=0.0):
    return bool(np.all(pad_values(chart, w) > eps))


def symplectic_pad(chart, w):
    """``w + w^mu``: the slice point completed by the nonnegative roots
    ``sqrt(A_h)`` off the vertex. Lies on the zero level of ``Psi``."""
    A = pad_values(chart, w)
    bad = np.flatnonzero(A <= 0)
    if bad.size:
        h = chart.off[bad[0]]
        raise ChartDomainError(f"point outside the symplectic chart: "
                               f"A_{h + 1} = {A[bad[0]]:.3g} <= 0")
    z = np.zeros(chart.polytope.d, dtype=complex)
    z[list(chart.active)] = w
    z[list(chart.off)] = np.sqrt(A)
    return z


def moment_of_slice(chart, w):
    """The point ``nu`` of the polytope with ``<nu, X_j> = |w_j|^2 + lambda_j``
    on the vertex facets; equals the moment image of the padded point."""
    p = chart.polytope
    I = list(chart.active)
    rhs = np.abs(np.asarray(w)) ** 2 + p.offsets[I]
    return np.linalg.solve(p.normals[I], rhs)


def sample_polytope(p, rng, size=None, near=None, spread=1.0):
    """Random points of the polytope: Dirichlet mixtures of the vertices.

    With ``near`` (a vertex), points are pulled toward it by ``1 - spread``.
    """
    V = np.array([v.point for v in p.vertices])
    k = 1 if size is None else size
    w = rng.dirichlet(np.ones(len(V)), size=k)
    pts = w @ V
    if near is not None:
        pts = near.point + spread * (pts - near.point)
    return pts[0] if size is None else pts


def sample_symplectic_slice(chart, rng, spread=0.9):
    """Random point of the symplectic chart at ``chart``'s vertex.

    Built from a random ``nu`` in the polytope interior: ``|w_j|^2 =
    <nu, X_j> - lambda_j`` on the vertex facets, uniform phases.
    """
    p = chart.polytope
    nu = sample_polytope(p, rng, near=chart.vertex, spread=spread)
    r2 = np.clip(p.slack(nu)[list(chart.active)], 0.0, None)
    return np.sqrt(r2) * np.exp(2j * np.pi * rng.random(len(chart.active)))


def is_on_level(p, kernel, z, tol=EPS_GEOM):
    return bool(np.abs(moment_Psi(p, kernel, z)).max() <= tol)
