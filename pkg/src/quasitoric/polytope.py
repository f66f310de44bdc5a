"""Simple convex polytopes in H-representation.

A polytope is stored as the data of the inequalities ``<mu, X_j> >= lambda_j``:
an array of inward normals ``X`` (one row per facet) and the offsets
``lambda``.  Facets are indexed from 0 internally; reports shift to 1-based
labels.
"""

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
import json

import numpy as np
from scipy.optimize import linprog

from ._expr import evaluate
from .config import EPS_GEOM
from .errors import NonSimpleError, SpecParseError, ValidationError


@dataclass(frozen=True, eq=False)
class Vertex:
    point: np.ndarray
    active: tuple  # sorted facet indices I, |I| = n

    def __repr__(self):
        return f"Vertex(point={self.point.tolist()}, active={self.active})"


@dataclass(frozen=True, eq=False)
class Polytope:
    """H-representation ``{mu : <mu, X_j> >= lambda_j}``.

    Use :func:`make_polytope` or :func:`parse_spec` to build a validated
    instance; the constructor itself does no checking.
    """

    normals: np.ndarray
    offsets: np.ndarray
    quasilattice: np.ndarray | None = None
    eps: float = EPS_GEOM
    name: str = field(default="")

    @property
    def n(self):
        return self.normals.shape[1]

    @property
    def d(self):
        return self.normals.shape[0]

    @cached_property
    def vertices(self):
        return enumerate_vertices(self, eps=self.eps)

    @cached_property
    def faces(self):
        return face_index_sets(self)

    def slack(self, mu):
        """``<mu, X_j> - lambda_j`` for every facet."""
        return self.normals @ np.asarray(mu, dtype=float) - self.offsets

    def contains(self, mu, eps=None):
        eps = self.eps if eps is None else eps
        return bool(np.all(self.slack(mu) >= -eps))

    def with_offsets(self, offsets):
        """Same normals and quasilattice, new offsets (validated)."""
        return make_polytope(self.normals, offsets, self.quasilattice,
                             eps=self.eps, name=self.name)


def make_polytope(normals, offsets, quasilattice=None, eps=EPS_GEOM, name=""):
    """Build a :class:`Polytope` and check it is a nonempty, bounded,
    full-dimensional polytope without zero normals or redundant facets.

    Simplicity is *not* checked here; :func:`enumerate_vertices` reports
    non-simple vertices.
    """
    X = np.array(normals, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    lam = np.array(offsets, dtype=float).reshape(-1)
    if X.ndim != 2:
        raise ValidationError("expected a list of vectors", field="normals")
    d, n = X.shape
    if n < 1:
        raise ValidationError("ambient dimension must be at least 1", field="n")
    if lam.shape != (d,):
        raise ValidationError(f"expected {d} offsets, got {lam.size}", field="offsets")
    if d < n + 1:
        raise ValidationError(f"need at least n+1 = {n + 1} facets, got {d}",
                              field="normals")
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(lam))):
        raise ValidationError("non-finite entry", field="normals")
    norms = np.linalg.norm(X, axis=1)
    for j in np.flatnonzero(norms <= eps):
        raise ValidationError(f"zero normal X_{j + 1}", field="normals")

    # coincident facets: same normalized inequality twice
    unit = np.hstack([X / norms[:, None], (lam / norms)[:, None]])
    for i, j in combinations(range(d), 2):
        if np.allclose(unit[i], unit[j], atol=eps, rtol=0):
            raise ValidationError(f"facets {i + 1} and {j + 1} coincide",
                                  field="normals")

    Q = None
    if quasilattice is not None:
        Q = np.array(quasilattice, dtype=float)
        if Q.ndim == 1:
            Q = Q[:, None]
        if Q.ndim != 2 or Q.shape[1] != n:
            raise ValidationError(f"generators must be vectors of length {n}",
                                  field="quasilattice")
        if np.linalg.matrix_rank(Q) < n:
            raise ValidationError("generators do not span", field="quasilattice")

    p = Polytope(X, lam, Q, eps=eps, name=name)
    _check_full_dimensional(p)
    _check_bounded(p)
    _check_essential(p)
    return p


def _check_full_dimensional(p):
    # maximise a uniform slack s <= 1: s* > 0 iff the interior is nonempty
    n, d = p.n, p.d
    c = np.zeros(n + 1)
    c[-1] = -1.0
    A_ub = np.hstack([-p.normals, np.ones((d, 1))])
    res = linprog(c, A_ub=A_ub, b_ub=-p.offsets,
                  bounds=[(None, None)] * n + [(None, 1.0)], method="highs")
    if res.status == 2 or (res.status == 0 and -res.fun < -p.eps):
        raise ValidationError("polytope is empty", field="offsets")
    if res.status != 0 or -res.fun <= p.eps:
        raise ValidationError("polytope is not full-dimensional", field="offsets")


def _check_bounded(p):
    for i in range(p.n):
        for sign in (1.0, -1.0):
            c = np.zeros(p.n)
            c[i] = sign
            res = linprog(c, A_ub=-p.normals, b_ub=-p.offsets,
                          bounds=[(None, None)] * p.n, method="highs")
            if res.status == 3:
                raise ValidationError("polytope is unbounded", field="normals")


def _check_essential(p):
    seen = set()
    for _, active in _vertex_candidates(p, p.eps):
        seen.update(active)
    for j in range(p.d):
        if j not in seen:
            raise ValidationError(f"facet {j + 1} is redundant (touches no vertex)",
                                  field="normals")


def _vertex_candidates(p, eps):
    """All vertices of ``p`` with their full active sets, simple or not."""
    X, lam, n = p.normals, p.offsets, p.n
    scale = max(1.0, float(np.abs(lam).max(initial=0.0)))
    found = []
    for I in combinations(range(p.d), n):
        M = X[list(I)]
        if abs(np.linalg.det(M)) <= eps * np.prod(np.linalg.norm(M, axis=1)):
            continue
        mu = np.linalg.solve(M, lam[list(I)])
        slack = X @ mu - lam
        if np.any(slack < -eps * scale):
            continue
        if any(np.allclose(mu, q, atol=eps * scale, rtol=0) for q, _ in found):
            continue
        active = tuple(int(j) for j in np.flatnonzero(np.abs(slack) <= eps * scale))
        found.append((mu, active))
    return found


def enumerate_vertices(p, eps=None):
    """Vertices of ``p``, each with its active set of exactly n facets.

    Exhaustive: solves every n-subset of the facet equations and keeps the
    feasible solutions. Raises :class:`NonSimpleError` at the first vertex
    lying on more than n facets.
    """
    eps = p.eps if eps is None else eps
    out = []
    for mu, active in _vertex_candidates(p, eps):
        if len(active) != p.n:
            raise NonSimpleError(mu, active)
        out.append(Vertex(mu, active))
    return out


def face_index_sets(p):
    """Index sets ``I_F`` of all nonempty faces, the empty set included.

    For a simple polytope these are exactly the subsets of vertex active sets.
    """
    faces = set()
    for v in p.vertices:
        for k in range(len(v.active) + 1):
            faces.update(frozenset(c) for c in combinations(v.active, k))
    return faces


def zero_set(z, eps=EPS_GEOM):
    return frozenset(int(j) for j in np.flatnonzero(np.abs(np.asarray(z)) <= eps))


def ambient_membership(z, p, eps=None):
    """``I(z)`` if ``z`` lies in the union of the orbits ``C^d_F``, else None."""
    eps = p.eps if eps is None else eps
    z = np.asarray(z, dtype=complex)
    if z.shape != (p.d,):
        raise ValidationError(f"expected a point of C^{p.d}", field="point")
    I = zero_set(z, eps)
    return I if I in p.faces else None


def face_of_point(p, mu, eps=None):
    """Active set of the face containing ``mu`` in its relative interior."""
    eps = p.eps if eps is None else eps
    slack = p.slack(mu)
    if np.any(slack < -eps):
        raise ValidationError("point lies outside the polytope", field="point")
    return frozenset(int(j) for j in np.flatnonzero(np.abs(slack) <= eps))


# -- spec files -------------------------------------------------------------

def parse_spec(text, eps=EPS_GEOM, name=""):
    """Parse the JSON polytope format and return a validated :class:`Polytope`.

    ``{"n": 2, "normals": [[1, 0], ...], "offsets": [0, ...],
    "quasilattice": [[...], ...], "params": {"t": "sqrt(2)"}}``; entries may
    be numbers or constant expressions over the params.
    """
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise SpecParseError("top level must be a JSON object")
    unknown = set(obj) - {"n", "normals", "offsets", "quasilattice", "params", "name"}
    if unknown:
        raise SpecParseError(f"unknown keys: {sorted(unknown)}")
    for key in ("n", "normals", "offsets"):
        if key not in obj:
            raise SpecParseError(f"missing key {key!r}")
    n = obj["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise SpecParseError("'n' must be a positive integer")

    names = {}
    params = obj.get("params", {})
    if not isinstance(params, dict):
        raise SpecParseError("'params' must be an object")
    for key, value in params.items():
        if not key.isidentifier():
            raise SpecParseError(f"bad parameter name {key!r}")
        names[key] = evaluate(value, names)

    def vectors(key):
        rows = obj[key]
        if not isinstance(rows, list) or not rows:
            raise SpecParseError(f"{key!r} must be a nonempty list")
        out = []
        for row in rows:
            if n == 1 and not isinstance(row, list):
                row = [row]
            if not isinstance(row, list) or len(row) != n:
                raise SpecParseError(f"every entry of {key!r} must have length {n}")
            out.append([evaluate(x, names) for x in row])
        return out

    normals = vectors("normals")
    if not isinstance(obj["offsets"], list):
        raise SpecParseError("'offsets' must be a list")
    offsets = [evaluate(x, names) for x in obj["offsets"]]
    Q = vectors("quasilattice") if "quasilattice" in obj else None
    return make_polytope(normals, offsets, Q, eps=eps,
                         name=obj.get("name", name) or name)


def to_spec(p, params=None, exprs=None):
    """Serialize ``p`` to the spec format (floats written losslessly)."""
    obj = {"n": p.n}
    if p.name:
        obj["name"] = p.name
    if params:
        obj["params"] = params
    if exprs:
        obj.update(exprs)
    else:
        obj["normals"] = p.normals.tolist()
        obj["offsets"] = p.offsets.tolist()
        if p.quasilattice is not None:
            obj["quasilattice"] = p.quasilattice.tolist()
    return json.dumps(obj, indent=2)
