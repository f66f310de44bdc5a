"""Verification suite: the checks run by ``quasitoric verify`` and by the
acceptance tests.

Each check returns a :class:`CheckRecord`. Checks tied to a particular worked
polytope (interval, triangle, pentagon, rational cases, octahedron) are run
when the input is recognised as that polytope and reported as ``skip``
otherwise, so every check appears exactly once in a report.
"""

from dataclasses import dataclass, field, asdict
from itertools import permutations
import math

import numpy as np

from . import atlas as atl
from . import kahler, kempfness, lattice, moment
from .config import EPS_GEOM, EPS_LIN, H_FD, SEARCH_RADIUS, TOL_PSI
from .errors import NonSimpleError, QuasitoricError


@dataclass
class RunConfig:
    eps_geom: float = EPS_GEOM
    eps_lin: float = EPS_LIN
    tol_psi: float = TOL_PSI
    h_fd: float = H_FD
    radius: int = SEARCH_RADIUS
    samples: int = 100
    seed: int = 7

    def __post_init__(self):
        for name in ("eps_geom", "eps_lin", "tol_psi", "h_fd"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.radius < 0 or self.samples < 1:
            raise ValueError("radius must be >= 0 and samples >= 1")


@dataclass
class CheckRecord:
    name: str
    criterion: int
    status: str                # "pass" | "fail" | "skip"
    residual: float | None = None
    tolerance: float | None = None
    samples: int = 0
    detail: str = ""

    def as_dict(self):
        return asdict(self)


@dataclass
class SolverStats:
    solves: int = 0
    iterations: int = 0
    max_iterations: int = 0
    max_residual: float = 0.0

    def record(self, proj):
        self.solves += 1
        self.iterations += proj.iterations
        self.max_iterations = max(self.max_iterations, proj.iterations)
        self.max_residual = max(self.max_residual, proj.residual)


@dataclass
class Context:
    polytope: object
    atlas: object
    config: RunConfig
    rng: np.random.Generator
    stats: SolverStats = field(default_factory=SolverStats)

    @property
    def kernel(self):
        return self.atlas.kernel

    def project(self, z, **kw):
        proj = kempfness.project_to_level(self.polytope, self.kernel, z,
                                          tol=self.config.tol_psi, **kw)
        self.stats.record(proj)
        return proj


def _record(name, criterion, residual, tol, samples=0, detail=""):
    ok = residual is not None and np.isfinite(residual) and residual <= tol
    return CheckRecord(name, criterion, "pass" if ok else "fail",
                       None if residual is None else float(residual), tol, samples, detail)


def _skip(name, criterion, why):
    return CheckRecord(name, criterion, "skip", detail=why)


def _guard(name, criterion, tol, fn):
    """Run ``fn`` and turn package errors into a failed record."""
    try:
        return fn()
    except QuasitoricError as exc:
        return CheckRecord(name, criterion, "fail", None, tol, 0,
                           f"{type(exc).__name__}: {exc}")


# -- recognising the worked polytopes ------------------------------------------------------

def recognize(p, tol=1e-12):
    """``(kind, params)`` for the worked polytopes, else ``(None, {})``."""
    X, lam = p.normals, p.offsets
    if p.n == 1 and p.d == 2 and X[0, 0] > 0 and X[1, 0] < 0 \
            and abs(lam[0]) <= tol and abs(lam[1] - X[1, 0]) <= tol:
        return "interval", {"s": float(X[0, 0]), "t": float(-X[1, 0])}
    if p.n == 2 and p.d == 3 and np.allclose(X[:2], np.eye(2), atol=tol, rtol=0) \
            and np.all(X[2] < 0) and np.allclose(lam[:2], 0, atol=tol, rtol=0) \
            and abs(lam[2] + X[2, 0] * X[2, 1]) <= tol:
        return "triangle", {"s": float(-X[2, 1]), "t": float(-X[2, 0])}
    if p.n == 2 and p.d == 5:
        ang = 2 * np.pi * np.arange(5) / 5
        P = np.column_stack([np.cos(ang), np.sin(ang)])
        if np.allclose(X, P, atol=tol, rtol=0) and np.allclose(lam, np.cos(4 * np.pi / 5),
                                                               atol=tol, rtol=0):
            return "pentagon", {}
    if p.n == 2 and p.d == 4:
        S = np.array([[1, 0], [0, 1], [-1, 0], [0, -1]], dtype=float)
        if np.array_equal(X, S) and np.array_equal(lam, [0, 0, -1, -1]):
            return "square", {}
    return None, {}


# -- sampling ----------------------------------------------------------------------------------

def sample_ambient(p, rng, size):
    """Points of ``C^d_Delta``: a random face, zeros on its facets, random
    log-normal moduli and uniform angles elsewhere."""
    faces = sorted(p.faces, key=lambda f: (len(f), sorted(f)))
    out = []
    for _ in range(size):
        F = faces[rng.integers(len(faces))]
        z = np.exp(0.7 * rng.normal(size=p.d)) * np.exp(2j * np.pi * rng.random(p.d))
        z[list(F)] = 0
        out.append(z)
    return out


def sample_dense(p, rng, size):
    return [np.exp(0.5 * rng.normal(size=p.d)) * np.exp(2j * np.pi * rng.random(p.d))
            for _ in range(size)]


def _slice_samples(chart, rng, size):
    # mostly spread over the whole chart, some hugging the vertex
    return [moment.sample_symplectic_slice(chart, rng, spread=0.95 if k % 2 else 0.5)
            for k in range(size)]


# -- criterion 1: interval ----------------------------------------------------------------------

def check_interval(ctx):
    kind, prm = recognize(ctx.polytope)
    names = ["interval.kernel_direction", "interval.transition_slope",
             "interval.level_equation"]
    if kind != "interval":
        return [_skip(n, 1, "input is not the unit interval fixture") for n in names]
    s, t = prm["s"], prm["t"]
    b = ctx.kernel.matrix[:, 0]
    out = [_record(names[0], 1, abs(b[1] / b[0] - s / t), 1e-12,
                   detail=f"ratio {float(b[1] / b[0])!r}, s/t = {s / t!r}")]
    slope = atl.transition_matrix(ctx.atlas[0], ctx.atlas[1])[0, 0]
    out.append(_record(names[1], 1, abs(slope + s / t), 1e-12,
                       detail=f"slope {float(slope)!r}"))
    # Psi is a fixed multiple of t|z1|^2 + s|z2|^2 - st
    scale = (b[0] * t + b[1] * s) / (t * t + s * s)
    worst = 0.0
    for z in sample_dense(ctx.polytope, ctx.rng, ctx.config.samples):
        psi = moment.moment_Psi(ctx.polytope, ctx.kernel, z)[0]
        ref = t * abs(z[0]) ** 2 + s * abs(z[1]) ** 2 - s * t
        worst = max(worst, abs(psi / scale - ref) / max(1.0, abs(ref)))
    out.append(_record(names[2], 1, worst, 1e-12, ctx.config.samples))
    return out


# -- criterion 2: triangle ------------------------------------------------------------------------

def check_triangle(ctx):
    kind, prm = recognize(ctx.polytope)
    names = ["triangle.kernel_family", "triangle.chart_groups"]
    if kind != "triangle":
        return [_skip(n, 2, "input is not the right-triangle fixture") for n in names]
    s, t = prm["s"], prm["t"]
    fam = np.array([t, s, 1.0])
    fam /= np.linalg.norm(fam)
    b = ctx.kernel.matrix[:, 0]
    res = min(np.abs(b - fam).max(), np.abs(b + fam).max())
    res = max(res, np.abs(lattice.projection_matrix(ctx.polytope) @ fam).max())
    out = [_record(names[0], 2, res, 1e-12)]
    # rules of the three chart groups, keyed by the nonvanishing coordinate
    expected = {frozenset({1, 2}): np.array([s / t, 1 / t]),
                frozenset({0, 2}): np.array([t / s, 1 / s]),
                frozenset({0, 1}): np.array([t, s])}
    worst, detail = 0.0, []
    for c in ctx.atlas:
        gens = c.gamma_gens
        if len(gens) != 1 or lattice.gamma_order(gens) is not None:
            worst = np.inf
            detail.append(f"chart {c.active}: expected one generator of infinite order")
            continue
        ph = gens[0].phase
        ref = expected[frozenset(c.active)]
        d1 = ph - ref
        d2 = ph + ref
        r = min(np.abs(d1 - np.round(d1)).max(), np.abs(d2 - np.round(d2)).max())
        worst = max(worst, r)
    out.append(_record(names[1], 2, worst, 1e-12, detail="; ".join(detail)))
    return out


# -- criterion 3: pentagon ------------------------------------------------------------------------

def pentagon_family(Z):
    """Exponent vector of the displayed three-parameter family in ``N_C``."""
    a = math.cos(2 * math.pi / 5)
    Z1, Z2, Z3 = Z
    return np.array([Z1, Z2, Z3, 2 * a * (Z2 - Z3) + Z1, 2 * a * (Z2 - Z1) + Z3])


def pentagon_gamma1_phases():
    """Phase vectors on ``(z_4, z_5)`` of the generators ``h, k, l`` of the
    displayed action of the first chart group."""
    a = math.cos(2 * math.pi / 5)
    return np.array([[0.0, -2 * a], [2 * a, 2 * a], [-2 * a, 0.0]])


def _phases_in_group(targets, gens, radius):
    """Largest distance (mod Z) from each target phase to the words of length
    bounded by ``radius`` in ``gens``."""
    from itertools import product
    G = np.array(gens)
    K = np.array(list(product(range(-radius, radius + 1), repeat=len(G))))
    W = K @ G
    worst = 0.0
    for ph in targets:
        d = W - ph
        worst = max(worst, float(np.abs(d - np.round(d)).max(axis=1).min()))
    return worst


def check_pentagon(ctx):
    kind, _ = recognize(ctx.polytope)
    names = ["pentagon.kernel_family", "pentagon.vertex_iso_2a",
             "pentagon.chart_group_1", "pentagon.cocycle"]
    if kind != "pentagon":
        return [_skip(n, 3, "input is not the regular pentagon fixture") for n in names]
    p, B = ctx.polytope, ctx.kernel.matrix
    P = lattice.projection_matrix(p)
    worst = 0.0
    for _ in range(20):
        Z = ctx.rng.normal(size=3) + 1j * ctx.rng.normal(size=3)
        V = pentagon_family(Z)
        inside = np.abs(P @ V).max()
        off_span = np.abs(V - B @ (B.T @ V)).max()
        worst = max(worst, inside, off_span)
    out = [_record(names[0], 3, worst, 1e-12, 20)]

    chart1 = next(c for c in ctx.atlas if c.active == (3, 4))
    u = chart1.iso_inverse(p.normals[0])
    two_a = 2 * math.cos(2 * math.pi / 5)
    out.append(_record(names[1], 3, max(abs(u[0] + 1), abs(u[1] - two_a)), 1e-12,
                       detail=f"pi_mu^-1(X_1) = {u.tolist()}"))

    ours = [g.phase for g in chart1.gamma_gens]
    displayed = pentagon_gamma1_phases()
    r = max(_phases_in_group(displayed, ours, ctx.config.radius),
            _phases_in_group(ours, displayed, ctx.config.radius))
    out.append(_record(names[2], 3, r, 1e-12))

    out.append(_cocycle(ctx, names[3], 3, 20))
    return out


def _cocycle(ctx, name, criterion, per_triple):
    worst, count = 0.0, 0
    n = ctx.polytope.n
    for i, j, k in permutations(range(len(ctx.atlas)), 3):
        for _ in range(per_triple):
            s = np.exp(0.5 * ctx.rng.normal(size=n)) * np.exp(2j * np.pi * ctx.rng.random(n))
            worst = max(worst, atl.cocycle_residual(ctx.atlas, i, j, k, s,
                                                    radius=ctx.config.radius))
            count += 1
    return _record(name, criterion, worst, 1e-8, count)


# -- criterion 4: projection ------------------------------------------------------------------

def check_projection(ctx):
    p, kernel, rng = ctx.polytope, ctx.kernel, ctx.rng
    m = max(200, 2 * ctx.config.samples)
    tol = ctx.config.tol_psi
    pts = sample_ambient(p, rng, m)

    def level():
        worst = 0.0
        for z in pts:
            proj = ctx.project(z)
            worst = max(worst, np.abs(moment.moment_Psi(p, kernel, proj.w)).max())
        return _record("projection.level_residual", 4, worst, tol, m)

    def idempotent():
        worst = 0.0
        for _ in range(m // 4):
            zeta = moment.sample_polytope(p, rng)
            z = moment.level_point_from_polytope(p, zeta, rng.random(p.d))
            worst = max(worst, np.abs(ctx.project(z).Y).max())
        return _record("projection.idempotent", 4, worst, 1e-10, m // 4)

    def a_invariance():
        worst = 0.0
        for z in pts[: m // 2]:
            w0 = ctx.project(z).w
            Y = rng.normal(size=kernel.rank) * 0.2
            w1 = ctx.project(kempfness.a_act(kernel, Y, z)).w
            worst = max(worst, np.abs(w1 - w0).max() / max(1.0, np.abs(w0).max()))
        return _record("projection.A_invariance", 4, worst, 1e-8, m // 2)

    def potential_gradient():
        worst, h = 0.0, 1e-5
        for z in pts[: m // 4]:
            Y = rng.normal(size=kernel.rank) * 0.1
            f = kempfness.gradient(p, kernel, z, Y)
            fd = np.array([(kempfness.potential(p, kernel, z, Y + h * e)
                            - kempfness.potential(p, kernel, z, Y - h * e)) / (2 * h)
                           for e in np.eye(kernel.rank)])
            worst = max(worst, np.abs(fd - f).max() / max(1.0, np.abs(f).max()))
        return _record("projection.potential_gradient", 4, worst, 1e-6, m // 4)

    def hessian():
        worst, h = -np.inf, 1e-4
        for z in pts[: m // 4]:
            Y = rng.normal(size=kernel.rank) * 0.1
            k = kernel.rank
            H = np.empty((k, k))
            for a, e in enumerate(np.eye(k)):
                H[:, a] = (kempfness.gradient(p, kernel, z, Y + h * e)
                           - kempfness.gradient(p, kernel, z, Y - h * e)) / (2 * h)
            worst = max(worst, np.linalg.eigvalsh((H + H.T) / 2).max())
        # residual: largest eigenvalue of the (negative definite) Hessian
        rec = _record("projection.hessian_negative_definite", 4, worst, 0.0, m // 4,
                      detail=f"largest eigenvalue {worst:.3e}")
        if worst >= 0:
            rec.status = "fail"
        return rec

    return [_guard("projection.level_residual", 4, tol, level),
            _guard("projection.idempotent", 4, 1e-10, idempotent),
            _guard("projection.A_invariance", 4, 1e-8, a_invariance),
            _guard("projection.potential_gradient", 4, 1e-6, potential_gradient),
            _guard("projection.hessian_negative_definite", 4, 0.0, hessian)]


# -- criterion 5: chi lifts --------------------------------------------------------------------

def check_chi(ctx):
    kernel, rng, cfg = ctx.kernel, ctx.rng, ctx.config

    def roundtrip():
        worst, count = 0.0, 0
        for c in ctx.atlas:
            for w in _slice_samples(c, rng, cfg.samples):
                z = kempfness.chi_lift(c, w)
                level, proj = kempfness.chi_inverse_level(c, kernel, z, tol=cfg.tol_psi)
                ctx.stats.record(proj)
                worst = max(worst, atl.model_distance(c, level[list(c.active)], w, cfg.radius))
                count += 1
        return _record("chi.roundtrip", 5, worst, 1e-8, count)

    def equivariance():
        worst, count = 0.0, 0
        n = ctx.polytope.n
        for c in ctx.atlas:
            for w in _slice_samples(c, rng, max(10, cfg.samples // 5)):
                W = rng.normal(size=n)
                lhs = kempfness.chi_lift(c, atl.torus_act(c, W, w))
                rhs = atl.torus_act(c, W, kempfness.chi_lift(c, w))
                worst = max(worst, atl.model_distance(c, lhs, rhs, cfg.radius))
                z = kempfness.chi_lift(c, w)
                a = kempfness.chi_inverse_lift(c, kernel, atl.torus_act(c, W, z), tol=cfg.tol_psi)
                b = atl.torus_act(c, W, kempfness.chi_inverse_lift(c, kernel, z, tol=cfg.tol_psi))
                worst = max(worst, atl.model_distance(c, a, b, cfg.radius))
                count += 1
        return _record("chi.torus_equivariance", 5, worst, 1e-8, count)

    def jacobian():
        worst, count = np.inf, 0
        for c in ctx.atlas:
            for w in _slice_samples(c, rng, cfg.samples):
                J = kempfness.chi_jacobian(c, w, h=cfg.h_fd)
                worst = min(worst, J.min_eigenvalue)
                count += 1
        rec = CheckRecord("chi.jacobian_positive_definite", 5,
                          "pass" if worst > 0 else "fail", float(worst), 0.0, count,
                          "residual is the smallest eigenvalue of the symmetric part")
        return rec

    return [_guard("chi.roundtrip", 5, 1e-8, roundtrip),
            _guard("chi.torus_equivariance", 5, 1e-8, equivariance),
            _guard("chi.jacobian_positive_definite", 5, 0.0, jacobian)]


# -- criterion 6: Kaehler --------------------------------------------------------------------

def check_kahler(ctx):
    p, kernel, rng, cfg = ctx.polytope, ctx.kernel, ctx.rng, ctx.config
    kind, prm = recognize(p)
    charts = list(ctx.atlas)
    per_chart = max(1, math.ceil(cfg.samples / len(charts)))
    if kind == "interval":
        charts, per_chart = charts[:1], cfg.samples

    def pullback():
        worst, count = 0.0, 0
        for c in charts:
            for w in _slice_samples(c, rng, per_chart):
                worst = max(worst, kahler.pullback_defect(c, kernel, w, h=cfg.h_fd))
                count += 1
        return _record("kahler.pullback_identity", 6, worst, 1e-6, count)

    def compatibility():
        worst_sym, worst_eig, count = 0.0, np.inf, 0
        for c in ctx.atlas:
            for w in _slice_samples(c, rng, max(5, cfg.samples // len(ctx.atlas) // 2)):
                Omega, G = kahler.form_matrix(c, kernel, kempfness.chi_lift(c, w), h=cfg.h_fd)
                scale = max(1.0, np.abs(G).max())
                worst_sym = max(worst_sym, np.abs(G - G.T).max() / scale)
                worst_eig = min(worst_eig, np.linalg.eigvalsh((G + G.T) / 2).min())
                count += 1
        rec = _record("kahler.compatibility", 6, worst_sym, 1e-6, count,
                      detail=f"smallest metric eigenvalue {worst_eig:.3e}")
        if worst_eig <= 0:
            rec.status = "fail"
        return rec

    def degeneracy():
        worst, count = 0.0, 0
        for c in ctx.atlas:
            for w in _slice_samples(c, rng, max(5, cfg.samples // len(ctx.atlas) // 2)):
                level = moment.symplectic_pad(c, w)
                frame = kahler.tangent_frame(p, kernel, level)
                orbit = kahler.orbit_vectors(kernel, level)
                v = rng.normal(size=p.d) + 1j * rng.normal(size=p.d)
                for k in range(kernel.rank):
                    worst = max(worst, abs(kahler.reduced_form(p, kernel, level, orbit[:, k],
                                                               v, frame)))
                    u2 = v + orbit[:, k]
                    v2 = rng.normal(size=p.d) + 1j * rng.normal(size=p.d)
                    worst = max(worst, abs(kahler.reduced_form(p, kernel, level, u2, v2, frame)
                                           - kahler.reduced_form(p, kernel, level, v, v2, frame)))
                count += 1
        return _record("kahler.orbit_degeneracy", 6, worst, 1e-8, count)

    def transition():
        if kind == "interval":
            s, t = prm["s"], prm["t"]
            worst = 0.0
            for _ in range(50):
                zeta = rng.normal() * 0.5 + 1j * rng.normal() * 0.1
                lhs = kahler.interval_cover_form("S", zeta, s, t)
                rhs = kahler.interval_cover_form("N", -(s / t) * zeta, s, t) * (s / t) ** 2
                worst = max(worst, abs(lhs - rhs) / max(1.0, abs(lhs)))
            # the closed form against the finite-difference form
            for c, name in zip(ctx.atlas, ("S", "N")):
                for z in (0.0, 0.3 + 0.2j):
                    Omega, _ = kahler.form_matrix(c, kernel, np.array([z]), h=cfg.h_fd)
                    worst = max(worst, abs(Omega[0, 1] * np.pi
                                           - kahler.interval_closed_form(name, z, s, t)))
            return _record("kahler.cover_transition", 6, worst, 1e-6, 54)
        worst, count = 0.0, 0
        pairs = [(i, j) for i in range(len(ctx.atlas)) for j in range(len(ctx.atlas)) if i != j]
        for i, j in pairs:
            for _ in range(2):
                s = np.exp(0.3 * rng.normal(size=p.n)) * np.exp(2j * np.pi * rng.random(p.n))
                worst = max(worst, kahler.cover_coherence(ctx.atlas[i], ctx.atlas[j],
                                                          kernel, s, h=cfg.h_fd))
                count += 1
        return _record("kahler.cover_transition", 6, worst, 1e-5, count)

    def closedness():
        if p.n == 1:
            return CheckRecord("kahler.closed", 6, "pass", 0.0, 0.0, 0,
                               "complex dimension 1: every 2-form is closed")
        if p.n != 2:
            return _skip("kahler.closed", 6, "finite-difference closedness only for n = 2")
        worst, count = 0.0, 0
        for c in ctx.atlas:
            w = moment.sample_symplectic_slice(c, rng, spread=0.7)
            z = kempfness.chi_lift(c, w)
            worst = max(worst, max(abs(v) for v in kahler.exterior_derivative(c, kernel, z).values()))
            count += 1
        return _record("kahler.closed", 6, worst, 1e-4, count)

    return [_guard("kahler.pullback_identity", 6, 1e-6, pullback),
            _guard("kahler.compatibility", 6, 1e-6, compatibility),
            _guard("kahler.orbit_degeneracy", 6, 1e-8, degeneracy),
            _guard("kahler.cover_transition", 6, 1e-5, transition),
            _guard("kahler.closed", 6, 1e-4, closedness)]


# -- criterion 7: offsets do not change the complex structure ---------------------------

def inflate(p, factor=2.0):
    """Homothety of ratio ``factor`` about the vertex barycentre: same normals,
    same combinatorics, new offsets."""
    c = np.mean([v.point for v in p.vertices], axis=0)
    centre = p.normals @ c
    return p.with_offsets(centre + factor * (p.offsets - centre))


def check_offsets(ctx):
    def run():
        p = ctx.polytope
        big = inflate(p)
        other = atl.build_atlas(big)
        same = len(other) == len(ctx.atlas)
        if same:
            for c1, c2 in zip(ctx.atlas, other):
                same &= c1.active == c2.active
                same &= all(np.array_equal(g1.phase, g2.phase)
                            for g1, g2 in zip(c1.gamma_gens, c2.gamma_gens))
            for key, T in ctx.atlas.transition_matrices().items():
                same &= np.array_equal(T, other.transition_matrices()[key])
        pads = [np.abs(moment.symplectic_pad(c1, np.zeros(p.n)) -
                       moment.symplectic_pad(c2, np.zeros(p.n))).max()
                for c1, c2 in zip(ctx.atlas, other)] if same else [0.0]
        changed = min(pads)
        rec = CheckRecord("offsets.complex_structure_unchanged", 7,
                          "pass" if same and changed > 1e-6 else "fail",
                          0.0 if same else 1.0, 0.0, len(ctx.atlas),
                          f"transition data bitwise identical: {same}; "
                          f"smallest change of level-set radius: {changed:.3e}")
        return rec
    return [_guard("offsets.complex_structure_unchanged", 7, 0.0, run)]


# -- criterion 8: rational sanity ---------------------------------------------------------

def check_rational(ctx):
    kind, prm = recognize(ctx.polytope)
    name = "rational.chart_group_orders"
    if kind == "square":
        orders = [lattice.gamma_order(c.gamma_gens) for c in ctx.atlas]
        ok = all(o == 1 for o in orders)
        return [CheckRecord(name, 8, "pass" if ok else "fail", 0.0 if ok else 1.0, 0.0,
                            len(orders), f"orders {orders}")]
    if kind == "interval":
        s, t = prm["s"], prm["t"]
        from fractions import Fraction
        r = Fraction(t / s).limit_denominator(1000)
        if abs(float(r) - t / s) > 1e-12:
            return [_skip(name, 8, "irrational interval")]
        # t/s = a/b in lowest terms: the chart at the first endpoint has the
        # phase t/s, hence order b; the other has s/t, hence order a
        expected = [r.denominator if c.active == (0,) else r.numerator for c in ctx.atlas]
        orders = [lattice.gamma_order(c.gamma_gens) for c in ctx.atlas]
        ok = orders == expected
        return [CheckRecord(name, 8, "pass" if ok else "fail", 0.0 if ok else 1.0, 0.0,
                            len(orders), f"orders {orders}, expected {expected}")]
    return [_skip(name, 8, "input is not a rational sanity fixture")]


# -- criterion 9: non-simple rejection ---------------------------------------------------------

def check_nonsimple(p):
    """Run on a polytope that may be non-simple; passes when a vertex lying
    on more than n facets is reported."""
    name = "nonsimple.rejected"
    try:
        p.vertices
    except NonSimpleError as exc:
        ok = len(exc.active) > p.n
        return [CheckRecord(name, 9, "pass" if ok else "fail", 0.0, 0.0, 1,
                            f"witness {list(map(float, exc.point))} on facets "
                            f"{[j + 1 for j in exc.active]}")]
    return [CheckRecord(name, 9, "skip", detail="polytope is simple")]


# -- driver --------------------------------------------------------------------------------

CHECKS = (check_interval, check_triangle, check_pentagon, check_projection,
          check_chi, check_kahler, check_offsets, check_rational)


def run_suite(p, config=None, criteria=None):
    """All checks on ``p``. Returns ``(records, context)``.

    ``criteria`` restricts to a set of criterion numbers (others are
    reported as skipped).
    """
    config = RunConfig() if config is None else config
    try:
        p.vertices
    except NonSimpleError:
        return [_skip(name, k, "polytope is not simple") for name, k in CHECK_NAMES
                if k != 9] + check_nonsimple(p), None
    ctx = Context(p, atl.build_atlas(p), config, np.random.default_rng(config.seed))
    records = []
    for k, fn in enumerate(CHECKS, start=1):
        recs = fn(ctx)
        if criteria is not None and k not in criteria:
            recs = [_skip(r.name, r.criterion, "not selected") for r in recs]
        records.extend(recs)
    records.extend(check_nonsimple(p))
    return records, ctx


CHECK_NAMES = [
    ("interval.kernel_direction", 1), ("interval.transition_slope", 1),
    ("interval.level_equation", 1),
    ("triangle.kernel_family", 2), ("triangle.chart_groups", 2),
    ("pentagon.kernel_family", 3), ("pentagon.vertex_iso_2a", 3),
    ("pentagon.chart_group_1", 3), ("pentagon.cocycle", 3),
    ("projection.level_residual", 4), ("projection.idempotent", 4),
    ("projection.A_invariance", 4), ("projection.potential_gradient", 4),
    ("projection.hessian_negative_definite", 4),
    ("chi.roundtrip", 5), ("chi.torus_equivariance", 5),
    ("chi.jacobian_positive_definite", 5),
    ("kahler.pullback_identity", 6), ("kahler.compatibility", 6),
    ("kahler.orbit_degeneracy", 6), ("kahler.cover_transition", 6), ("kahler.closed", 6),
    ("offsets.complex_structure_unchanged", 7),
    ("rational.chart_group_orders", 8),
    ("nonsimple.rejected", 9),
]
