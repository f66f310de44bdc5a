"""Vertex charts of the complex quotient ``C^d_Delta / N_C``.

A chart at the vertex with active set ``I`` is the slice ``C^I`` through the
base point ``z^mu`` (zeros on ``I``, ones elsewhere), modulo the chart group
generated by ``exp(pi_mu^{-1}(q))`` for quasilattice vectors ``q``. Points of
a chart are plain complex arrays indexed like ``chart.active``.
"""

from dataclasses import dataclass
from itertools import product
from typing import NamedTuple

import numpy as np

from . import lattice
from .config import EPS_GEOM, SEARCH_RADIUS
from .errors import ChartDomainError, ValidationError


@dataclass(frozen=True, eq=False)
class VertexChart:
    index: int
    vertex: object
    base_point: np.ndarray
    gamma_gens: list
    a: np.ndarray
    polytope: object
    quasilattice: object

    @property
    def active(self):
        return self.vertex.active

    @property
    def off(self):
        return tuple(j for j in range(self.polytope.d) if j not in self.active)

    def contains(self, z, eps=EPS_GEOM):
        """Membership in the open set where every coordinate off ``I`` is nonzero."""
        z = np.asarray(z)
        return bool(np.all(np.abs(z[list(self.off)]) > eps))

    def ambient(self, coords):
        """Representative ``z^mu + coords`` in ``C^d``."""
        z = self.base_point.astype(complex)
        z[list(self.active)] = coords
        return z

    def iso_inverse(self, v):
        return lattice.vertex_iso_inverse(self.polytope, self.vertex, v)

    def gamma(self, word):
        """Chart-group element for an integer word over the quasilattice."""
        return lattice.gamma_element(self.polytope, self.vertex, self.quasilattice, word)


@dataclass(frozen=True, eq=False)
class Atlas:
    polytope: object
    quasilattice: object
    kernel: object
    charts: list

    def __iter__(self):
        return iter(self.charts)

    def __len__(self):
        return len(self.charts)

    def __getitem__(self, k):
        return self.charts[k]

    def chart_for(self, z):
        """Chart whose domain contains ``z`` most comfortably (largest
        smallest off-``I`` modulus)."""
        z = np.asarray(z)
        best, best_val = None, 0.0
        for c in self.charts:
            val = np.abs(z[list(c.off)]).min(initial=np.inf)
            if val > best_val:
                best, best_val = c, val
        if best is None or best_val <= self.polytope.eps:
            raise ChartDomainError("point lies in no vertex chart")
        return best

    def transition_matrices(self):
        return {(c.index, e.index): transition_matrix(c, e)
                for c in self.charts for e in self.charts}


def build_chart(p, vertex, q=None, index=0):
    q = lattice.quasilattice(p) if q is None else q
    base = np.ones(p.d, dtype=complex)
    base[list(vertex.active)] = 0.0
    return VertexChart(index=index, vertex=vertex, base_point=base,
                       gamma_gens=lattice.gamma_generators(p, vertex, q, eps=p.eps),
                       a=lattice.a_matrix(p, vertex), polytope=p, quasilattice=q)


def build_atlas(p, q=None, kernel=None):
    q = lattice.quasilattice(p) if q is None else q
    kernel = lattice.kernel_basis(p) if kernel is None else kernel
    charts = [build_chart(p, v, q, index=k) for k, v in enumerate(p.vertices)]
    return Atlas(p, q, kernel, charts)


def to_slice(chart, z, eps=EPS_GEOM):
    """Slice coordinates of the ``N_C``-orbit of ``z`` (well defined modulo the
    chart group).

    The off-vertex coordinates are normalised to 1 by the element
    ``exp(V - pi_mu^{-1}(pi(V)))`` with ``V_h = -log(z_h) / 2 pi i``
    (principal branch).
    """
    z = np.asarray(z, dtype=complex)
    if not chart.contains(z, eps):
        raise ChartDomainError(f"point has a zero coordinate outside facets "
                               f"{[j + 1 for j in chart.active]}")
    off = list(chart.off)
    V = -np.log(z[off]) / (2j * np.pi)
    u = chart.iso_inverse(chart.polytope.normals[off].T @ V)
    return z[list(chart.active)] * np.exp(-2j * np.pi * u)


def from_slice(chart, coords):
    return chart.ambient(coords)


def torus_act(chart, W, coords):
    """Lifted quasitorus action ``exp(pi_mu^{-1}(W)) . coords`` for
    ``W`` in the complexified quasi-Lie algebra ``C^n``."""
    u = chart.iso_inverse(np.asarray(W, dtype=complex))
    return np.exp(2j * np.pi * u) * np.asarray(coords)


# -- word search in the chart group ---------------------------------------------

def _word_table(chart, radius):
    m = len(chart.gamma_gens)
    if m == 0:
        return np.zeros((1, 0), dtype=int), np.zeros((1, len(chart.active)))
    if (2 * radius + 1) ** m > 5_000_000:
        raise ValidationError(f"{m} chart-group generators: word search with radius "
                              f"{radius} is too large", field="radius")
    K = np.array(list(product(range(-radius, radius + 1), repeat=m)), dtype=int)
    P = np.array([g.phase for g in chart.gamma_gens])
    return K, K @ P


def _element_from_row(chart, k):
    word = np.zeros(chart.quasilattice.size, dtype=int)
    phase = np.zeros(len(chart.active))
    for ka, g in zip(k, chart.gamma_gens):
        word = word + ka * g.word
        phase = phase + ka * g.phase
    return lattice.GammaElement(chart.active, word, phase)


def same_model_point(chart, s1, s2, radius=SEARCH_RADIUS, tol=EPS_GEOM):
    """Chart-group element carrying ``s1`` to ``s2`` (coefficients bounded by
    ``radius``), or None.

    The residual is measured as ``max_j |g s1_j - s2_j| / max(1, |s2|)``; the
    returned element is the one with the smallest residual.
    """
    s1 = np.asarray(s1, dtype=complex)
    s2 = np.asarray(s2, dtype=complex)
    K, phases = _word_table(chart, radius)
    moved = np.exp(2j * np.pi * phases) * s1
    scale = max(1.0, float(np.abs(s2).max(initial=0.0)))
    res = np.abs(moved - s2).max(axis=1, initial=0.0) / scale
    k = int(np.argmin(res))
    if res[k] > tol:
        return None
    return _element_from_row(chart, K[k])


def model_distance(chart, s1, s2, radius=SEARCH_RADIUS):
    """Smallest residual of :func:`same_model_point` over the searched words."""
    K, phases = _word_table(chart, radius)
    moved = np.exp(2j * np.pi * phases) * np.asarray(s1, dtype=complex)
    s2 = np.asarray(s2, dtype=complex)
    scale = max(1.0, float(np.abs(s2).max(initial=0.0)))
    return float((np.abs(moved - s2).max(axis=1, initial=0.0) / scale).min())


def nontrivial_stabilizer(chart, coords, radius=SEARCH_RADIUS, tol=EPS_GEOM):
    """A word that fixes ``coords`` but acts nontrivially on the slice, or None."""
    coords = np.asarray(coords, dtype=complex)
    K, phases = _word_table(chart, radius)
    frac = np.abs(phases - np.round(phases)).max(axis=1, initial=0.0)
    moved = np.exp(2j * np.pi * phases) * coords
    res = np.abs(moved - coords).max(axis=1, initial=0.0)
    hits = np.flatnonzero((res <= tol) & (frac > tol))
    return None if hits.size == 0 else _element_from_row(chart, K[hits[0]])


# -- transitions on universal covers -------------------------------------------------

class CoverPoint(NamedTuple):
    """Point of the universal cover of the chart overlap: ``z`` on the facets
    shared by both vertices, logarithmic coordinates ``zeta`` on the facets of
    the source vertex only."""

    z: np.ndarray
    zeta: np.ndarray


def overlap_indices(src, dst):
    common = tuple(j for j in src.active if j in dst.active)
    src_only = tuple(j for j in src.active if j not in dst.active)
    dst_only = tuple(j for j in dst.active if j not in src.active)
    return common, src_only, dst_only


def transition_matrix(src, dst):
    """``pi_nu^{-1} o pi_mu`` on slice coordinates: rows indexed by the
    target active set, columns by the source active set."""
    p = src.polytope
    return lattice.vertex_iso_inverse(p, dst.vertex, p.normals[list(src.active)].T)


def transition_cover(src, dst, x):
    """``(z, zeta) -> (exp(rho(T zeta)) z, sigma(T zeta))`` with
    ``T = pi_nu^{-1} o pi_mu``; ``rho``/``sigma`` keep the shared resp.
    target-only facets."""
    common, src_only, dst_only = overlap_indices(src, dst)
    T = transition_matrix(src, dst)
    cols = [src.active.index(j) for j in src_only]
    v = T[:, cols] @ np.asarray(x.zeta, dtype=complex)
    rho = v[[dst.active.index(j) for j in common]]
    sigma = v[[dst.active.index(j) for j in dst_only]]
    return CoverPoint(np.exp(2j * np.pi * rho) * np.asarray(x.z, dtype=complex), sigma)


def cover_to_slice(src, dst, x):
    """Project a cover point of the (src, dst) overlap to src slice coordinates."""
    common, src_only, _ = overlap_indices(src, dst)
    coords = np.zeros(len(src.active), dtype=complex)
    coords[[src.active.index(j) for j in common]] = x.z
    coords[[src.active.index(j) for j in src_only]] = np.exp(2j * np.pi * np.asarray(x.zeta))
    return coords


def slice_to_cover(src, dst, coords, eps=EPS_GEOM):
    """Principal-branch lift of src slice coordinates to the overlap cover."""
    common, src_only, _ = overlap_indices(src, dst)
    coords = np.asarray(coords, dtype=complex)
    w = coords[[src.active.index(j) for j in src_only]]
    if np.any(np.abs(w) <= eps):
        raise ChartDomainError("point is outside the chart overlap")
    return CoverPoint(coords[[src.active.index(j) for j in common]],
                      np.log(w) / (2j * np.pi))


def slice_transition(src, dst, coords):
    """Change of charts on slice coordinates via the principal lift."""
    if src.index == dst.index and src.vertex is dst.vertex:
        return np.asarray(coords, dtype=complex).copy()
    x = slice_to_cover(src, dst, coords)
    y = transition_cover(src, dst, x)
    # active sets are sorted, so the shared facets come in the same order on
    # both sides and y is directly a point of the (dst, src) cover
    return cover_to_slice(dst, src, y)


def lambda_element(src, dst, word):
    """Deck-type group element on the (src, dst) cover for a quasilattice word:
    ``(exp Z, W)`` with ``Z + W = pi_mu^{-1}(q)`` split over shared and
    source-only facets."""
    common, src_only, _ = overlap_indices(src, dst)
    u = src.gamma(word).phase
    Z = u[[src.active.index(j) for j in common]]
    W = u[[src.active.index(j) for j in src_only]]
    return Z, W


def lambda_act(element, x):
    Z, W = element
    return CoverPoint(np.exp(2j * np.pi * Z) * np.asarray(x.z), np.asarray(x.zeta) + W)


def cocycle_residual(atlas, i, j, k, coords, radius=SEARCH_RADIUS):
    """Distance, modulo the target chart group, between ``g_jk o g_ij`` and
    ``g_ik`` applied to slice coordinates ``coords`` of chart ``i``."""
    ci, cj, ck = atlas[i], atlas[j], atlas[k]
    via = slice_transition(cj, ck, slice_transition(ci, cj, coords))
    direct = slice_transition(ci, ck, coords)
    return model_distance(ck, via, direct, radius)
