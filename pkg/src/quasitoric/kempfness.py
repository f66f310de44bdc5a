"""Projection of ``A``-orbits onto the zero level of ``Psi`` and the chart lifts
of the identification between the symplectic and the complex quotient.

An element ``exp(i B Y)`` of ``A`` rescales ``z_j`` by ``e^{-2 pi (BY)_j}``.
Along the orbit, ``Psi`` is the gradient ``f`` of the strictly concave
function

    F(Y) = sum_j -(1/4 pi) e^{-4 pi (BY)_j} |z_j|^2 + lambda_j (BY)_j,

so the unique orbit point on the level set is the root of ``f``, found here
by damped Newton iteration.
"""

from dataclasses import dataclass

import numpy as np

from . import moment
from .config import H_FD, TOL_PSI
from .errors import ChartDomainError, ConvergenceError
from .polytope import ambient_membership, zero_set

MAX_ITER = 200


def potential(p, kernel, z, Y):
    BY = kernel.matrix @ np.asarray(Y, dtype=float)
    r2 = np.abs(np.asarray(z)) ** 2
    return float(np.sum(-np.exp(-4 * np.pi * BY) * r2 / (4 * np.pi) + p.offsets * BY))


def gradient(p, kernel, z, Y):
    """``f(Y) = Psi(exp(i B Y) . z)``."""
    B = kernel.matrix
    r2 = np.abs(np.asarray(z)) ** 2
    return B.T @ (np.exp(-4 * np.pi * (B @ Y)) * r2 + p.offsets)


def hessian(p, kernel, z, Y):
    B = kernel.matrix
    r2 = np.abs(np.asarray(z)) ** 2
    weights = np.exp(-4 * np.pi * (B @ Y)) * r2
    return -4 * np.pi * (B.T * weights) @ B


def a_act(kernel, Y, z):
    """``exp(i B Y) . z``."""
    return np.exp(-2 * np.pi * (kernel.matrix @ np.asarray(Y))) * np.asarray(z)


@dataclass(frozen=True, eq=False)
class Projection:
    w: np.ndarray
    Y: np.ndarray
    iterations: int
    residual: float


def project_to_level(p, kernel, z, tol=TOL_PSI, max_iter=MAX_ITER, y0=None):
    """The unique point of ``A . z`` on the zero level of ``Psi``.

    Damped Newton on ``f(Y) = 0`` from ``y0`` (default 0) with backtracking
    on ``|f|^2``; once ``max|f| <= tol`` one more full Newton step is taken
    when it does not increase the residual, so downstream finite
    differences see a solution accurate to rounding.
    """
    z = np.asarray(z, dtype=complex)
    if ambient_membership(z, p) is None:
        zeros = sorted(j + 1 for j in zero_set(z, p.eps))
        raise ChartDomainError(f"point is not in C^d_Delta: coordinates {zeros} "
                               f"vanish and do not index a face")
    Y = np.zeros(kernel.rank) if y0 is None else np.array(y0, dtype=float)
    with np.errstate(over="ignore", invalid="ignore"):
        f = gradient(p, kernel, z, Y)
        merit = float(f @ f)
        it = 0
        while np.abs(f).max() > tol:
            if it >= max_iter:
                raise ConvergenceError(
                    f"Kempf-Ness projection did not converge in {max_iter} "
                    f"iterations (residual {np.abs(f).max():.3e})",
                    residual=float(np.abs(f).max()), iterations=it)
            step = np.linalg.solve(hessian(p, kernel, z, Y), -f)
            alpha = 1.0
            while True:
                Y_new = Y + alpha * step
                f_new = gradient(p, kernel, z, Y_new)
                m_new = float(f_new @ f_new)
                if np.isfinite(m_new) and m_new <= (1 - 1e-4 * alpha) * merit:
                    break
                alpha *= 0.5
                if alpha < 1e-14:
                    raise ConvergenceError(
                        f"line search stalled (residual {np.abs(f).max():.3e})",
                        residual=float(np.abs(f).max()), iterations=it)
            Y, f, merit = Y_new, f_new, m_new
            it += 1
        step = np.linalg.solve(hessian(p, kernel, z, Y), -f)
        f_pol = gradient(p, kernel, z, Y + step)
        if np.all(np.isfinite(f_pol)) and float(f_pol @ f_pol) <= merit:
            Y, f = Y + step, f_pol
    return Projection(a_act(kernel, Y, z), Y, it, float(np.abs(f).max()))


# -- chart lifts ------------------------------------------------------------------------

def chi_lift(chart, w):
    """Complex-chart coordinates of the level point padded from ``w``.

    ``z_j = w_j exp(2 pi sum_h a_jh C_h)`` with ``C_h = log(A_h) / 4 pi``.
    """
    A = moment.pad_values(chart, w)
    if np.any(A <= 0):
        raise ChartDomainError("point outside the symplectic chart")
    C = np.log(A) / (4 * np.pi)
    u = chart.a[:, list(chart.off)] @ C
    return np.exp(2 * np.pi * u) * np.asarray(w, dtype=complex)


def chi_inverse_level(chart, kernel, z, tol=TOL_PSI, max_iter=MAX_ITER):
    """Level-set representative of the orbit through ``z^mu + z``, rotated by
    ``N`` so its off-vertex coordinates are nonnegative reals.

    Returns ``(padded_point, projection)``.
    """
    p = chart.polytope
    proj = project_to_level(p, kernel, chart.ambient(z), tol=tol, max_iter=max_iter)
    w = proj.w
    off = list(chart.off)
    V = -np.angle(w[off]) / (2 * np.pi)
    u = chart.iso_inverse(p.normals[off].T @ V)
    out = w.copy()
    out[off] = np.abs(w[off])
    out[list(chart.active)] = w[list(chart.active)] * np.exp(-2j * np.pi * u)
    return out, proj


def chi_inverse_lift(chart, kernel, z, tol=TOL_PSI, max_iter=MAX_ITER):
    """Symplectic-chart coordinates ``w`` with ``chi_lift(w) = z`` modulo the
    chart group."""
    level, _ = chi_inverse_level(chart, kernel, z, tol=tol, max_iter=max_iter)
    return level[list(chart.active)]


def real_coords(w):
    w = np.asarray(w)
    return np.concatenate([w.real, w.imag])


def complex_coords(x):
    x = np.asarray(x, dtype=float)
    n = len(x) // 2
    return x[:n] + 1j * x[n:]


@dataclass(frozen=True, eq=False)
class ChiJacobianSample:
    chart: int
    w: np.ndarray
    matrix: np.ndarray
    positive_definite: bool
    min_eigenvalue: float


def chi_jacobian(chart, w, h=H_FD):
    """Central finite-difference Jacobian of :func:`chi_lift` in real
    coordinates ``(Re w, Im w)``; positive definiteness is judged on the
    symmetric part."""
    w = np.asarray(w, dtype=complex)
    x0 = real_coords(w)
    m = len(x0)
    D = np.empty((m, m))
    for k in range(m):
        e = np.zeros(m)
        e[k] = h
        plus, minus = complex_coords(x0 + e), complex_coords(x0 - e)
        if not (moment.in_symplectic_chart(chart, plus)
                and moment.in_symplectic_chart(chart, minus)):
            raise ChartDomainError("finite-difference step leaves the symplectic chart")
        D[:, k] = (real_coords(chi_lift(chart, plus))
                   - real_coords(chi_lift(chart, minus))) / (2 * h)
    lam_min = float(np.linalg.eigvalsh((D + D.T) / 2).min())
    return ChiJacobianSample(chart.index, w, D, lam_min > 0, lam_min)
