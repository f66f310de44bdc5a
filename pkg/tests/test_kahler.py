import math

import numpy as np
import pytest

from quasitoric import kahler, kempfness, moment
from quasitoric.errors import ValidationError
from quasitoric.kempfness import complex_coords, real_coords

from conftest import S, T, chart_with


def level_sample(atlas, rng):
    c = atlas[int(rng.integers(len(atlas)))]
    return moment.symplectic_pad(c, moment.sample_symplectic_slice(c, rng))


def test_standard_form_matches_omega0(rng):
    n = 3
    Om = kahler.standard_form_matrix(n)
    J = kahler.complex_structure(n)
    for _ in range(5):
        u = rng.normal(size=n) + 1j * rng.normal(size=n)
        v = rng.normal(size=n) + 1j * rng.normal(size=n)
        assert real_coords(u) @ Om @ real_coords(v) == pytest.approx(kahler.omega0(u, v))
        np.testing.assert_allclose(complex_coords(J @ real_coords(u)), 1j * u)
    # g = omega(., J .) is the positive Euclidean metric / pi
    np.testing.assert_allclose(Om @ J, np.eye(2 * n) / np.pi, atol=1e-15)


def test_tangent_frame_invariants(any_atlas, rng):
    p, kb = any_atlas.polytope, any_atlas.kernel
    for _ in range(10):
        w = level_sample(any_atlas, rng)
        fr = kahler.tangent_frame(p, kb, w)
        dPsi = kahler.level_differential(kb, w)
        assert np.abs(dPsi @ fr.level_basis).max() <= 1e-10
        assert np.abs(fr.orbit_basis.T @ fr.horizontal_basis).max() <= 1e-10
        assert np.abs(dPsi @ fr.horizontal_basis).max() <= 1e-10
        assert fr.horizontal_basis.shape[1] == 2 * p.n
        # dPsi is the derivative of Psi
        h = 1e-6
        v = rng.normal(size=p.d) + 1j * rng.normal(size=p.d)
        fd = (moment.moment_Psi(p, kb, w + h * v) - moment.moment_Psi(p, kb, w - h * v)) / (2 * h)
        np.testing.assert_allclose(dPsi @ real_coords(v), fd, atol=1e-7)


def test_reduced_form_basic(any_atlas, rng):
    p, kb = any_atlas.polytope, any_atlas.kernel
    for _ in range(10):
        w = level_sample(any_atlas, rng)
        fr = kahler.tangent_frame(p, kb, w)
        u = rng.normal(size=p.d) + 1j * rng.normal(size=p.d)
        v = rng.normal(size=p.d) + 1j * rng.normal(size=p.d)
        assert abs(kahler.reduced_form(p, kb, w, u, u, fr)) < 1e-14
        a, b = kahler.reduced_form(p, kb, w, u, v, fr), kahler.reduced_form(p, kb, w, v, u, fr)
        assert a == pytest.approx(-b, abs=1e-14)
        for orbit in kahler.orbit_vectors(kb, w).T:
            assert abs(kahler.reduced_form(p, kb, w, orbit, v, fr)) < 1e-8


def test_reduced_form_degenerate_only_on_orbits(pentagon_atlas, rng):
    # on the horizontal space the form is nondegenerate
    p, kb = pentagon_atlas.polytope, pentagon_atlas.kernel
    w = level_sample(pentagon_atlas, rng)
    fr = kahler.tangent_frame(p, kb, w)
    H = fr.horizontal_basis
    M = np.array([[kahler.omega0(complex_coords(H[:, a]), complex_coords(H[:, b]))
                   for b in range(H.shape[1])] for a in range(H.shape[1])])
    assert np.abs(np.linalg.eigvals(M)).min() > 1e-3


def test_interval_reduced_form_at_vertex(interval_atlas):
    p, kb = interval_atlas.polytope, interval_atlas.kernel
    w = np.array([0.0, math.sqrt(T)], dtype=complex)
    val = kahler.reduced_form(p, kb, w, np.array([1.0, 0]), np.array([1j, 0]))
    assert val == pytest.approx(1 / np.pi, abs=1e-14)


def test_off_level_rejected(interval_atlas):
    with pytest.raises(ValidationError):
        kahler.tangent_frame(interval_atlas.polytope, interval_atlas.kernel, np.ones(2))


def test_interval_form_at_zero(interval_atlas):
    c = chart_with(interval_atlas, (0,))
    ex, ey = np.array([1.0 + 0j]), np.array([1j])
    s = kahler.kahler_eval(c, interval_atlas.kernel, np.zeros(1), ex, ey)
    assert s.omega > 0
    Omega, G = kahler.form_matrix(c, interval_atlas.kernel, np.zeros(1))
    assert G[0, 1] == pytest.approx(0, abs=1e-8) and G[0, 0] > 0 and G[1, 1] > 0
    # closed form at 0 is t^{t/s}
    assert kahler.interval_closed_form("S", 0.0, S, T) == pytest.approx(T ** (T / S), rel=1e-14)
    assert s.omega * np.pi == pytest.approx(T ** (T / S), abs=1e-6)


@pytest.mark.parametrize("chart", ["S", "N"])
def test_interval_closed_form_against_fd(interval_atlas, rng, chart):
    c = interval_atlas[0 if chart == "S" else 1]
    for _ in range(5):
        z = np.exp(rng.normal()) * np.exp(2j * np.pi * rng.random())
        Omega, _ = kahler.form_matrix(c, interval_atlas.kernel, np.array([z]))
        assert Omega[0, 1] * np.pi == pytest.approx(kahler.interval_closed_form(chart, z, S, T),
                                                    abs=1e-6)


def test_interval_closed_form_gamma_invariant(rng):
    for _ in range(10):
        z = complex(rng.normal(), rng.normal())
        g = np.exp(2j * np.pi * T / S)
        assert kahler.interval_closed_form("S", z * g, S, T) == kahler.interval_closed_form("S", z, S, T)


def test_interval_cover_transition(rng):
    for _ in range(50):
        zeta = complex(rng.normal() * 0.5, rng.normal() * 0.2)
        lhs = kahler.interval_cover_form("S", zeta, S, T)
        rhs = kahler.interval_cover_form("N", -(S / T) * zeta, S, T) * (S / T) ** 2
        assert lhs == pytest.approx(rhs, rel=1e-6)


def test_interval_pullback_identity(interval_atlas, rng):
    c = chart_with(interval_atlas, (0,))
    for _ in range(10):
        w = moment.sample_symplectic_slice(c, rng)
        assert kahler.pullback_defect(c, interval_atlas.kernel, w) <= 1e-6


def test_type_11_and_compatibility(pentagon_atlas, rng):
    kb = pentagon_atlas.kernel
    J = kahler.complex_structure(2)
    for c in pentagon_atlas:
        for _ in range(4):
            z = kempfness.chi_lift(c, moment.sample_symplectic_slice(c, rng))
            Omega, G = kahler.form_matrix(c, kb, z)
            np.testing.assert_allclose(J.T @ Omega @ J, Omega, atol=1e-6)
            np.testing.assert_allclose(G, G.T, atol=1e-6)
            assert np.linalg.eigvalsh((G + G.T) / 2).min() > 0


def test_pentagon_pullback(pentagon_atlas, rng):
    for c in pentagon_atlas:
        w = moment.sample_symplectic_slice(c, rng)
        assert kahler.pullback_defect(c, pentagon_atlas.kernel, w) <= 1e-6


def test_chart_coherence(triangle_atlas, rng):
    for src in triangle_atlas:
        for dst in triangle_atlas:
            if src is not dst:
                s = np.exp(0.3 * rng.normal(size=2)) * np.exp(2j * np.pi * rng.random(2))
                assert kahler.cover_coherence(src, dst, triangle_atlas.kernel, s) <= 1e-5


def test_closed_on_surfaces(triangle_atlas, rng):
    c = triangle_atlas[0]
    z = kempfness.chi_lift(c, moment.sample_symplectic_slice(c, rng, spread=0.7))
    dw = kahler.exterior_derivative(c, triangle_atlas.kernel, z)
    assert len(dw) == 4
    assert max(abs(v) for v in dw.values()) <= 1e-4
