"""Linear algebra behind the quotient construction.

Conventions: ``exp(Z)`` is the vector with entries ``e^{2 pi i Z_j}``, so the
torus is ``R^d / Z^d``. The projection ``pi`` sends ``e_j`` to the normal
``X_j``; its matrix is ``normals.T`` (shape ``n x d``), used both as a real
and as a complex-linear map. The kernel ``n`` of ``pi`` is carried by a
``d x (d-n)`` basis matrix ``B``; elements of ``N``, ``A = exp(i n)`` and
``N_C`` are stored through their coefficients in that basis, never as raw
multiplier vectors.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np
from scipy.linalg import null_space

from .config import EPS_GEOM, EPS_LIN, SEARCH_RADIUS
from .errors import ValidationError


def projection_matrix(p):
    return p.normals.T


@dataclass(frozen=True, eq=False)
class KernelBasis:
    """Columns span ``ker pi``. Row ``j`` of ``matrix`` is the covector
    ``alpha_j`` restricted to the kernel, in the dual basis."""

    matrix: np.ndarray

    @property
    def rank(self):
        return self.matrix.shape[1]

    def vector(self, c):
        """Kernel vector ``B c`` for coefficients ``c`` (real or complex)."""
        return self.matrix @ np.asarray(c)


def kernel_basis(p_or_matrix, eps=EPS_LIN):
    """Orthonormal basis of ``ker pi`` from the SVD.

    The sign of every column is fixed so that its entry of largest modulus
    is positive, which makes the output reproducible.
    """
    P = _pi(p_or_matrix)
    n, d = P.shape
    if np.linalg.matrix_rank(P, tol=eps) != n:
        raise ValidationError("projection has rank < n", field="normals")
    B = null_space(P, rcond=eps)
    for k in range(B.shape[1]):
        j = np.argmax(np.abs(B[:, k]))
        if B[j, k] < 0:
            B[:, k] = -B[:, k]
    return KernelBasis(B)


def kernel_basis_from(p_or_matrix, columns, eps=EPS_LIN):
    """Validate a user-chosen kernel basis (e.g. integral generators).

    ``columns`` is ``d x (d-n)``. Raises if a column is not in the kernel or
    the columns are dependent.
    """
    P = _pi(p_or_matrix)
    B = np.array(columns, dtype=float)
    if B.ndim == 1:
        B = B[:, None]
    n, d = P.shape
    if B.shape != (d, d - n):
        raise ValidationError(f"kernel basis must have shape {(d, d - n)}",
                              field="kernel")
    scale = max(1.0, float(np.abs(B).max()))
    if np.abs(P @ B).max() > eps * scale * max(1.0, float(np.abs(P).max())):
        raise ValidationError("columns are not in ker pi", field="kernel")
    if np.linalg.matrix_rank(B) != d - n:
        raise ValidationError("columns are linearly dependent", field="kernel")
    return KernelBasis(B)


def _pi(p_or_matrix):
    if hasattr(p_or_matrix, "normals"):
        return projection_matrix(p_or_matrix)
    return np.asarray(p_or_matrix, dtype=float)


# -- vertex isomorphisms --------------------------------------------------------

def _vertex_block(p, vertex):
    # columns X_j, j in I
    return p.normals[list(vertex.active)].T


def vertex_iso_inverse(p, vertex, v):
    """``pi_mu^{-1}(v)``: the coefficients ``u`` (indexed like ``vertex.active``)
    with ``sum_j u_j X_j = v``. Works for real or complex ``v`` and for
    stacked right-hand sides of shape ``(n, k)``."""
    M = _vertex_block(p, vertex)
    return np.linalg.solve(M, np.asarray(v))


def vertex_iso(p, vertex, u):
    """``pi_mu(u) = sum_j u_j X_j`` for ``u`` indexed like ``vertex.active``."""
    return _vertex_block(p, vertex) @ np.asarray(u)


def a_matrix(p, vertex):
    """Matrix of ``pi`` in the basis ``{X_j : j in I}``: ``X_h = sum_j a[j, h] X_j``.

    Shape ``(n, d)``; the columns of facets in ``I`` are unit vectors.
    """
    a = vertex_iso_inverse(p, vertex, projection_matrix(p))
    for k, j in enumerate(vertex.active):
        a[:, j] = 0.0
        a[k, j] = 1.0
    return a


def embed(p, vertex, u):
    """Extend ``u`` (indexed like ``vertex.active``) by zeros to ``C^d``."""
    out = np.zeros(p.d, dtype=np.result_type(np.asarray(u), float))
    out[list(vertex.active)] = u
    return out


# -- quasilattice -------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Quasilattice:
    """Z-span of ``generators``; ``normal_words[j]`` expresses ``X_j`` in them."""

    generators: np.ndarray
    normal_words: np.ndarray

    @property
    def size(self):
        return self.generators.shape[0]


def quasilattice(p, generators=None, radius=SEARCH_RADIUS, eps=EPS_GEOM):
    """The quasilattice of ``p``: its declared generators, else the normals.

    Every normal must be an integer combination of the generators; for
    user-supplied generators the coefficients are found by bounded search.
    """
    if generators is None:
        generators = p.quasilattice
    if generators is None:
        return Quasilattice(p.normals.copy(), np.eye(p.d, dtype=int))
    G = np.array(generators, dtype=float)
    if G.ndim == 1:
        G = G[:, None]
    words = []
    for j, X in enumerate(p.normals):
        hit = None
        for k in np.argsort(np.linalg.norm(G - X, axis=1)):
            if np.allclose(G[k], X, atol=eps, rtol=0):
                hit = np.eye(len(G), dtype=int)[k]
                break
        if hit is None:
            hit = _integer_word(G, X, radius, eps)
        if hit is None:
            raise ValidationError(
                f"normal X_{j + 1} is not in the Z-span of the generators "
                f"(searched coefficients up to {radius})", field="quasilattice")
        words.append(hit)
    return Quasilattice(G, np.array(words, dtype=int))


def _integer_word(G, target, radius, eps):
    g = len(G)
    if (2 * radius + 1) ** g > 2_000_000:
        return None
    K = np.array(list(product(range(-radius, radius + 1), repeat=g)))
    res = np.abs(K @ G - target).max(axis=1)
    k = int(np.argmin(res))
    return K[k] if res[k] <= eps * max(1.0, np.abs(target).max()) else None


# -- chart groups ---------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GammaElement:
    """Element of the chart group at a vertex.

    ``word`` holds integer coefficients over the quasilattice generators and
    ``phase`` (indexed like the vertex active set) is ``pi_mu^{-1}`` of the
    corresponding quasilattice vector. It acts on slice coordinates by
    ``z_j -> exp(2 pi i phase_j) z_j``.
    """

    active: tuple
    word: np.ndarray
    phase: np.ndarray

    def act(self, coords):
        return np.exp(2j * np.pi * self.phase) * np.asarray(coords)

    def is_identity(self, eps=EPS_GEOM):
        return bool(np.all(np.abs(self.phase - np.round(self.phase)) <= eps))

    def __mul__(self, other):
        return GammaElement(self.active, self.word + other.word, self.phase + other.phase)

    def inverse(self):
        return GammaElement(self.active, -self.word, -self.phase)

    def equals(self, other, eps=EPS_GEOM):
        diff = self.phase - other.phase
        return bool(np.all(np.abs(diff - np.round(diff)) <= eps))


def gamma_element(p, vertex, q, word):
    word = np.asarray(word, dtype=int)
    return GammaElement(vertex.active, word,
                        vertex_iso_inverse(p, vertex, word @ q.generators))


def gamma_generators(p, vertex, q, eps=EPS_GEOM):
    """Generators ``exp(pi_mu^{-1}(q_a))`` of the chart group, one per
    quasilattice generator; those acting trivially (integral phase) are
    dropped."""
    gens = []
    for a in range(q.size):
        g = gamma_element(p, vertex, q, np.eye(q.size, dtype=int)[a])
        if not g.is_identity(eps):
            gens.append(g)
    return gens


def phase_denominators(gens, max_denominator=10_000, eps=1e-9):
    """Smallest denominators of the generator phases, or None for a phase
    that is not (numerically) rational with denominator <= max_denominator."""
    out = []
    for g in gens:
        dens = []
        for x in g.phase:
            f = Fraction(float(x)).limit_denominator(max_denominator)
            if abs(float(f) - x) > eps:
                return None
            dens.append(f.denominator)
        out.append(dens)
    return out


def gamma_order(gens, max_order=10_000, eps=1e-9):
    """Order of the group generated by ``gens`` acting on the slice, or None
    when it exceeds ``max_order`` (infinite for irrational phases)."""
    if not gens:
        return 1
    n = len(gens[0].phase)
    scale = 1e6

    def key(phase):
        r = np.mod(np.round(np.mod(phase, 1.0) * scale), scale)
        return tuple(int(x) for x in r)

    seen = {key(np.zeros(n)): np.zeros(n)}
    frontier = [np.zeros(n)]
    while frontier:
        nxt = []
        for ph in frontier:
            for g in gens:
                new = np.mod(ph + g.phase, 1.0)
                k = key(new)
                if k not in seen:
                    seen[k] = new
                    nxt.append(new)
                    if len(seen) > max_order:
                        return None
        frontier = nxt
    return len(seen)


# -- N_C elements --------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class NGroupElement:
    """``exp(B c)`` in ``N_C`` for complex kernel coefficients ``c``.

    Real ``c`` gives an element of ``N``, purely imaginary ``c`` one of ``A``.
    """

    kernel: KernelBasis
    coeffs: np.ndarray

    @property
    def exponent(self):
        return self.kernel.vector(self.coeffs)

    @property
    def multipliers(self):
        return np.exp(2j * np.pi * self.exponent)

    def act(self, z):
        return self.multipliers * np.asarray(z)

    def in_N(self, eps=EPS_LIN):
        return bool(np.all(np.abs(np.imag(self.coeffs)) <= eps))

    def in_A(self, eps=EPS_LIN):
        return bool(np.all(np.abs(np.real(self.coeffs)) <= eps))

    def __mul__(self, other):
        return NGroupElement(self.kernel, self.coeffs + other.coeffs)


def n_element(kernel, coeffs):
    return NGroupElement(kernel, np.asarray(coeffs, dtype=complex).reshape(kernel.rank))


def polar_split(w):
    """Unique factorisation ``w = x a`` with ``x`` in ``N`` and ``a`` in ``A``."""
    c = np.asarray(w.coeffs, dtype=complex)
    return (NGroupElement(w.kernel, np.real(c) + 0j),
            NGroupElement(w.kernel, 1j * np.imag(c)))


def kernel_complement_rank(p, kernel, indices):
    """Rank of ``[B | e_I]``; full rank ``d - n + |I|`` means ``pi`` restricted
    to the coordinates ``I`` is injective."""
    E = np.eye(p.d)[:, sorted(indices)]
    return int(np.linalg.matrix_rank(np.hstack([kernel.matrix, E])))
