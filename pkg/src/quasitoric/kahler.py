"""The reduced symplectic form, read in the complex charts.

Tangent vectors of ``C^d`` are complex arrays; the ambient form is

    omega_0(u, v) = (1/pi) Im sum_j conj(u_j) v_j,

the sign being fixed so that ``g(u, v) = omega_0(u, i v)`` is positive. On the
level set, ``omega_0`` descends to the quotient through the horizontal space:
the Euclidean orthogonal complement of the complexified ``N``-orbit
directions. Chart coordinates are mapped to the level set by
:func:`quasitoric.kempfness.chi_inverse_level` and differentiated by central
finite differences.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import null_space
from scipy.optimize import brentq

from . import kempfness, moment
from .atlas import CoverPoint, cover_to_slice, overlap_indices, slice_to_cover, transition_cover
from .config import H_FD, TOL_PSI
from .errors import ValidationError
from .kempfness import complex_coords, real_coords

LEVEL_TOL = 1e-8


def omega0(u, v):
    return float(np.imag(np.vdot(u, v))) / np.pi


def standard_form_matrix(n):
    """Matrix of ``omega0`` on ``C^n`` in real coordinates ``(Re, Im)``."""
    I = np.eye(n)
    Z = np.zeros((n, n))
    return np.block([[Z, I], [-I, Z]]) / np.pi


def complex_structure(n):
    """Multiplication by ``i`` in real coordinates ``(Re, Im)``."""
    I = np.eye(n)
    Z = np.zeros((n, n))
    return np.block([[Z, -I], [I, Z]])


@dataclass(frozen=True, eq=False)
class TangentFrame:
    point: np.ndarray
    level_basis: np.ndarray       # columns, real 2d-vectors
    orbit_basis: np.ndarray       # columns, real 2d-vectors
    horizontal_basis: np.ndarray  # orthonormal columns, real 2d-vectors

    def project(self, v):
        """Orthogonal projection of the complex vector ``v`` on the horizontal space."""
        H = self.horizontal_basis
        return complex_coords(H @ (H.T @ real_coords(v)))


def level_differential(kernel, w):
    """``d Psi`` at ``w`` as a real ``(d-n) x 2d`` matrix."""
    B = kernel.matrix
    w = np.asarray(w)
    return 2 * np.hstack([B.T * w.real, B.T * w.imag])


def orbit_vectors(kernel, w):
    """Generators of the ``N``-orbit through ``w`` (complex, one per column):
    ``2 pi i b_j w_j`` for each kernel basis vector ``b``."""
    return 2j * np.pi * kernel.matrix * np.asarray(w)[:, None]


def tangent_frame(p, kernel, w, tol=LEVEL_TOL):
    w = np.asarray(w, dtype=complex)
    res = np.abs(moment.moment_Psi(p, kernel, w)).max()
    if res > tol:
        raise ValidationError(f"point is off the level set (|Psi| = {res:.3e})",
                              field="point")
    dPsi = level_differential(kernel, w)
    orbit = orbit_vectors(kernel, w)
    orbit_real = np.column_stack([real_coords(orbit[:, k]) for k in range(kernel.rank)])
    level = null_space(dPsi)
    horizontal = null_space(np.vstack([dPsi, orbit_real.T]))
    if horizontal.shape[1] != 2 * p.n:
        raise ValidationError("degenerate orbit at this point", field="point")
    return TangentFrame(w, level, orbit_real, horizontal)


def reduced_form(p, kernel, w, u, v, frame=None):
    """The reduced symplectic form at the level point ``w`` on the classes of
    the ambient vectors ``u`` and ``v``."""
    frame = tangent_frame(p, kernel, w) if frame is None else frame
    return omega0(frame.project(u), frame.project(v))


# -- forms in the complex charts -----------------------------------------------------

def level_map_jacobian(chart, kernel, z, h=H_FD, tol=TOL_PSI):
    """Level point over ``z`` and the finite-difference derivative of
    ``z -> level point`` as a complex ``d x 2n`` matrix (columns: real
    directions ``(Re, Im)`` of the chart coordinates)."""
    z = np.asarray(z, dtype=complex)
    x0 = real_coords(z)
    m = len(x0)
    w0, _ = kempfness.chi_inverse_level(chart, kernel, z, tol=tol)
    D = np.empty((chart.polytope.d, m), dtype=complex)
    for k in range(m):
        e = np.zeros(m)
        e[k] = h
        wp, _ = kempfness.chi_inverse_level(chart, kernel, complex_coords(x0 + e), tol=tol)
        wm, _ = kempfness.chi_inverse_level(chart, kernel, complex_coords(x0 - e), tol=tol)
        D[:, k] = (wp - wm) / (2 * h)
    return w0, D


def form_matrix(chart, kernel, z, h=H_FD, tol=TOL_PSI):
    """``(Omega, G)``: the Kaehler form and the metric ``omega(., J .)`` at
    chart coordinates ``z``, as ``2n x 2n`` real matrices."""
    p = chart.polytope
    w0, D = level_map_jacobian(chart, kernel, z, h=h, tol=tol)
    frame = tangent_frame(p, kernel, w0)
    P = np.column_stack([frame.project(D[:, k]) for k in range(D.shape[1])])
    m = P.shape[1]
    Omega = np.array([[omega0(P[:, a], P[:, b]) for b in range(m)] for a in range(m)])
    G = Omega @ complex_structure(p.n)
    return Omega, G


@dataclass(frozen=True, eq=False)
class FormSample:
    chart: int
    point: np.ndarray
    u: np.ndarray
    v: np.ndarray
    omega: float
    g: float


def kahler_eval(chart, kernel, z, u, v, h=H_FD, tol=TOL_PSI):
    """``omega(u, v)`` and ``g(u, v) = omega(u, i v)`` for chart tangent
    vectors ``u``, ``v`` in ``C^n``."""
    Omega, G = form_matrix(chart, kernel, z, h=h, tol=tol)
    ur, vr = real_coords(u), real_coords(v)
    return FormSample(chart.index, np.asarray(z), np.asarray(u), np.asarray(v),
                      float(ur @ Omega @ vr), float(ur @ G @ vr))


def pullback_defect(chart, kernel, w, h=H_FD):
    """Max deviation of ``chi_lift^* omega`` from the standard form at the
    symplectic-chart point ``w``."""
    Dchi = kempfness.chi_jacobian(chart, w, h=h).matrix
    Omega, _ = form_matrix(chart, kernel, kempfness.chi_lift(chart, w), h=h)
    pulled = Dchi.T @ Omega @ Dchi
    return float(np.abs(pulled - standard_form_matrix(chart.polytope.n)).max())


def exterior_derivative(chart, kernel, z, h=1e-4):
    """Finite-difference ``d omega`` at ``z``: array indexed by increasing
    triples ``(a, b, c)`` of real coordinates."""
    x0 = real_coords(z)
    m = len(x0)
    grads = []
    for k in range(m):
        e = np.zeros(m)
        e[k] = h
        Op, _ = form_matrix(chart, kernel, complex_coords(x0 + e))
        Om, _ = form_matrix(chart, kernel, complex_coords(x0 - e))
        grads.append((Op - Om) / (2 * h))
    out = {}
    for a in range(m):
        for b in range(a + 1, m):
            for c in range(b + 1, m):
                out[(a, b, c)] = grads[a][b, c] + grads[b][c, a] + grads[c][a, b]
    return out


# -- the interval, in closed form ----------------------------------------------------------

def _interval_chart_params(chart, s, t):
    # (T, p): the symplectic chart is |w|^2 < T / p, pad A = T - p |w|^2,
    # and chi_lift(w) = w A^{-p/2}
    if chart == "S":
        return t, t / s
    if chart == "N":
        return s, s / t
    raise ValueError(f"interval chart must be 'S' or 'N', got {chart!r}")


def interval_slice_radius2(chart, z, s, t):
    """``|w|^2`` of the symplectic-chart point over the complex-chart point ``z``:
    the root of ``|z|^2 = x (T - p x)^{-p}`` on ``[0, T/p)``."""
    T, p = _interval_chart_params(chart, s, t)
    y = float(abs(z)) ** 2
    if y == 0.0:
        return 0.0
    upper = T / p
    def g(x):
        return np.log(x) - p * np.log(T - p * x) - np.log(y)
    lo = min(y * T ** p, upper) * 0.5
    while g(lo) > 0:
        lo *= 0.5
    hi = upper * (1 - 1e-16)
    return brentq(g, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)


def interval_closed_form(chart, z, s, t):
    """Coefficient ``c`` with ``omega = c * omega_std`` on the interval chart
    ``'S'`` or ``'N'`` at ``z``.

    ``c = A^{p+1} / (A + p^2 x)`` where ``x = |w|^2`` solves the monotone
    radial equation and ``A = T - p x``. Depends on ``|z|`` only.
    """
    T, p = _interval_chart_params(chart, s, t)
    x = interval_slice_radius2(chart, z, s, t)
    A = T - p * x
    return A ** (p + 1) / (A + p * p * x)


def interval_cover_form(chart, zeta, s, t):
    """Coefficient of the interval form pulled back to the universal cover
    through ``z = exp(2 pi i zeta)``."""
    z = np.exp(2j * np.pi * zeta)
    return interval_closed_form(chart, z, s, t) * (2 * np.pi * abs(z)) ** 2


# -- coherence across charts ---------------------------------------------------------------

def _cover_vector(x):
    return np.concatenate([np.asarray(x.z, dtype=complex), np.asarray(x.zeta, dtype=complex)])


def _cover_point(src, dst, c):
    k = len(overlap_indices(src, dst)[0])
    return CoverPoint(c[:k], c[k:])


def _map_jacobian(fn, c0, h):
    x0 = real_coords(c0)
    m = len(x0)
    cols = []
    for k in range(m):
        e = np.zeros(m)
        e[k] = h
        cols.append((real_coords(fn(complex_coords(x0 + e)))
                     - real_coords(fn(complex_coords(x0 - e)))) / (2 * h))
    return np.column_stack(cols)


def cover_coherence(src, dst, kernel, coords, h=H_FD):
    """Relative mismatch between the forms of two charts pulled back to the
    universal cover of their overlap, at the cover point over ``coords``
    (slice coordinates of ``src``)."""
    def to_src(c):
        return cover_to_slice(src, dst, _cover_point(src, dst, c))

    def to_dst(c):
        return cover_to_slice(dst, src, transition_cover(src, dst, _cover_point(src, dst, c)))

    c0 = _cover_vector(slice_to_cover(src, dst, coords))
    O1, _ = form_matrix(src, kernel, to_src(c0), h=h)
    O2, _ = form_matrix(dst, kernel, to_dst(c0), h=h)
    D1 = _map_jacobian(to_src, c0, h)
    D2 = _map_jacobian(to_dst, c0, h)
    F1 = D1.T @ O1 @ D1
    F2 = D2.T @ O2 @ D2
    return float(np.abs(F1 - F2).max() / max(1.0, np.abs(F1).max()))
