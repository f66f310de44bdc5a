import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quasitoric import fixtures, lattice, moment
from quasitoric.errors import ChartDomainError, ValidationError
from quasitoric.polytope import ambient_membership

from conftest import S, T, chart_with


def test_moment_J(interval):
    np.testing.assert_array_equal(moment.moment_J(interval, np.zeros(2)), interval.offsets)
    np.testing.assert_allclose(moment.moment_J(interval, np.ones(2)), [1.0, 1.0 - math.sqrt(2)])


def test_interval_psi_is_level_equation(interval_atlas, rng):
    p, kb = interval_atlas.polytope, interval_atlas.kernel
    b = kb.matrix[:, 0]
    scale = b[0] / T
    assert b[1] / S == pytest.approx(scale, rel=1e-14)
    for _ in range(20):
        z = rng.normal(size=2) + 1j * rng.normal(size=2)
        psi = moment.moment_Psi(p, kb, z)[0]
        ref = T * abs(z[0]) ** 2 + S * abs(z[1]) ** 2 - S * T
        assert psi == pytest.approx(scale * ref, abs=1e-12)


def test_level_points(any_atlas, rng):
    p, kb = any_atlas.polytope, any_atlas.kernel
    for zeta in moment.sample_polytope(p, rng, size=30):
        z = moment.level_point_from_polytope(p, zeta, rng.random(p.d))
        assert np.abs(moment.moment_Psi(p, kb, z)).max() <= 1e-10
        assert ambient_membership(z, p) == frozenset()
    for v in p.vertices:
        z = moment.level_point_from_polytope(p, v.point)
        assert set(np.flatnonzero(np.abs(z) < 1e-7)) == set(v.active)
        assert ambient_membership(z, p) == frozenset(v.active)


def test_interval_vertex_level_point(interval):
    z = moment.level_point_from_polytope(interval, [0.0])
    np.testing.assert_allclose(z, [0, math.sqrt(T)], atol=1e-15)
    with pytest.raises(ValidationError):
        moment.level_point_from_polytope(interval, [1.5])


def test_pad_point_moment(any_atlas, rng):
    p, kb = any_atlas.polytope, any_atlas.kernel
    for c in any_atlas:
        for _ in range(10):
            w = moment.sample_symplectic_slice(c, rng)
            z = moment.symplectic_pad(c, w)
            nu = moment.moment_of_slice(c, w)
            np.testing.assert_allclose(moment.moment_J(p, z), p.normals @ nu, atol=1e-12)
            assert p.contains(nu)
            assert np.abs(moment.moment_Psi(p, kb, z)).max() <= 1e-12


def test_unpadded_point_is_off_level(pentagon_atlas, rng):
    p, kb = pentagon_atlas.polytope, pentagon_atlas.kernel
    c = pentagon_atlas[0]
    w = moment.sample_symplectic_slice(c, rng)
    assert np.abs(moment.moment_Psi(p, kb, c.ambient(w))).max() > 1e-3


def test_interval_pad(interval_atlas):
    c = chart_with(interval_atlas, (0,))
    for r in (0.0, 0.3, 0.9):
        z = moment.symplectic_pad(c, np.array([r]))
        assert z[1].real == pytest.approx(math.sqrt(T - (T / S) * r * r), abs=1e-15)
    assert moment.symplectic_pad(c, np.zeros(1))[1] == pytest.approx(math.sqrt(T))
    with pytest.raises(ChartDomainError, match="A_2"):
        moment.symplectic_pad(c, np.array([math.sqrt(S)]))


def test_N_invariance_of_level(any_atlas, rng):
    p, kb = any_atlas.polytope, any_atlas.kernel
    for _ in range(20):
        z = rng.normal(size=p.d) + 1j * rng.normal(size=p.d)
        g = lattice.n_element(kb, rng.normal(size=kb.rank))
        np.testing.assert_allclose(moment.moment_Psi(p, kb, g.act(z)),
                                   moment.moment_Psi(p, kb, z), atol=1e-12)


def test_A_moves_off_level(any_atlas, rng):
    # along exp(-i t Y) (the gradient flow of Psi_Y) the pairing <Psi, Y> strictly increases
    p, kb = any_atlas.polytope, any_atlas.kernel
    h = 1e-6
    for zeta in moment.sample_polytope(p, rng, size=10):
        z = moment.level_point_from_polytope(p, zeta, rng.random(p.d))
        Y = rng.normal(size=kb.rank)

        def psi_Y(t):
            g = lattice.n_element(kb, -1j * t * Y)
            return moment.moment_Psi(p, kb, g.act(z)) @ Y

        deriv = (psi_Y(h) - psi_Y(-h)) / (2 * h)
        exact = 4 * np.pi * np.sum((kb.matrix @ Y) ** 2 * np.abs(z) ** 2)
        assert deriv > 0
        assert deriv == pytest.approx(exact, rel=1e-6)


def test_dual_sequence_exact(any_atlas):
    # B^T pi^* = 0
    assert np.abs(any_atlas.kernel.matrix.T @ any_atlas.polytope.normals).max() <= 1e-10


@settings(max_examples=30, deadline=None)
@given(st.floats(0.0, 1.0), st.floats(0.0, 1.0))
def test_triangle_level_points_property(u, v):
    p = fixtures.load("triangle")
    kb = lattice.kernel_basis(p)
    zeta = np.array([u * (1 - v) * S, v * T])
    z = moment.level_point_from_polytope(p, zeta)
    assert np.abs(moment.moment_Psi(p, kb, z)).max() <= 1e-10
