import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quasitoric import atlas as atl, fixtures, lattice
from quasitoric.errors import ChartDomainError
from quasitoric.verify import inflate, sample_ambient

from conftest import S, T, chart_with


def test_interval_chart(interval_atlas):
    c = chart_with(interval_atlas, (0,))
    np.testing.assert_array_equal(c.base_point, [0, 1])
    assert len(c.gamma_gens) == 1
    assert abs(abs(c.gamma_gens[0].phase[0]) - T / S) < 1e-12


def test_base_points(any_atlas):
    for c in any_atlas:
        z = c.base_point
        assert np.all(z[list(c.active)] == 0)
        assert np.all(z[list(c.off)] == 1)


def test_to_slice_identity_on_slice(any_atlas, rng):
    for c in any_atlas:
        w = rng.normal(size=len(c.active)) + 1j * rng.normal(size=len(c.active))
        assert np.array_equal(atl.to_slice(c, c.ambient(w)), w)


def test_to_slice_interval_oracle(interval_atlas, rng):
    c = chart_with(interval_atlas, (0,))
    B = interval_atlas.kernel
    for _ in range(20):
        w = rng.normal() + 1j * rng.normal()
        theta = rng.uniform(-0.45, 0.45)
        z = np.array([w, np.exp(2j * np.pi * theta)])
        # the N_C element with second exponent -theta kills the phase of z_2
        g = lattice.n_element(B, [-theta / B.matrix[1, 0]])
        moved = g.act(z)
        assert abs(moved[1] - 1) < 1e-12
        got = atl.to_slice(c, z)[0]
        assert abs(got - moved[0]) < 1e-12
        assert abs(got - w * np.exp(-2j * np.pi * theta * T / S)) < 1e-12


def test_to_slice_outside_chart(interval_atlas):
    with pytest.raises(ChartDomainError):
        atl.to_slice(chart_with(interval_atlas, (0,)), np.array([1.0, 0.0]))


def test_to_slice_equivariance(any_atlas, rng):
    kb = any_atlas.kernel
    p = any_atlas.polytope
    for c in any_atlas:
        for _ in range(10):
            z = c.ambient(rng.normal(size=p.n) + 1j * rng.normal(size=p.n))
            z[list(c.off)] *= np.exp(2j * np.pi * rng.uniform(-0.3, 0.3, size=len(c.off)))
            coeffs = rng.uniform(-0.3, 0.3, kb.rank) + 1j * rng.uniform(-0.1, 0.1, kb.rank)
            g = lattice.n_element(kb, coeffs)
            assert atl.same_model_point(c, atl.to_slice(c, g.act(z)), atl.to_slice(c, z),
                                        tol=1e-10) is not None


def test_interval_transition(interval_atlas):
    S_, N_ = interval_atlas
    assert atl.transition_matrix(S_, N_)[0, 0] == pytest.approx(-S / T, abs=1e-12)
    y = atl.transition_cover(S_, N_, atl.CoverPoint(np.array([]), np.array([0.3 + 0.1j])))
    assert abs(y.zeta[0] - (-(S / T) * (0.3 + 0.1j))) < 1e-12


def test_transition_fixes_zero_zeta(pentagon_atlas, rng):
    for src in pentagon_atlas:
        for dst in pentagon_atlas:
            common, src_only, _ = atl.overlap_indices(src, dst)
            z = rng.normal(size=len(common)) + 1j * rng.normal(size=len(common))
            y = atl.transition_cover(src, dst, atl.CoverPoint(z, np.zeros(len(src_only))))
            np.testing.assert_array_equal(y.z, z)
            assert np.all(y.zeta == 0)


def test_pentagon_adjacent_transition(pentagon, pentagon_atlas):
    src = chart_with(pentagon_atlas, (3, 4))
    dst = chart_with(pentagon_atlas, (0, 4))
    Tm = atl.transition_matrix(src, dst)
    direct = np.linalg.solve(pentagon.normals[[0, 4]].T, pentagon.normals[3])
    np.testing.assert_allclose(Tm[:, 0], direct, atol=1e-14)
    np.testing.assert_allclose(Tm[:, 1], [0, 1], atol=1e-14)


def test_lambda_equivariance(any_atlas, rng):
    qsize = any_atlas.quasilattice.size
    for src in any_atlas:
        for dst in any_atlas:
            if src is dst:
                continue
            common, src_only, _ = atl.overlap_indices(src, dst)
            for _ in range(5):
                x = atl.CoverPoint(rng.normal(size=len(common)) + 1j * rng.normal(size=len(common)),
                                   rng.normal(size=len(src_only)) + 1j * rng.normal(size=len(src_only)))
                word = rng.integers(-2, 3, size=qsize)
                lhs = atl.transition_cover(src, dst, atl.lambda_act(atl.lambda_element(src, dst, word), x))
                rhs = atl.lambda_act(atl.lambda_element(dst, src, word), atl.transition_cover(src, dst, x))
                np.testing.assert_allclose(lhs.z, rhs.z, atol=1e-10)
                np.testing.assert_allclose(lhs.zeta, rhs.zeta, atol=1e-10)


def test_transition_roundtrip(any_atlas, rng):
    n = any_atlas.polytope.n
    for src in any_atlas:
        for dst in any_atlas:
            s = np.exp(0.5 * rng.normal(size=n)) * np.exp(2j * np.pi * rng.random(n))
            back = atl.slice_transition(dst, src, atl.slice_transition(src, dst, s))
            assert atl.model_distance(src, back, s) < 1e-10


@pytest.mark.parametrize("name", ["triangle", "pentagon", "square"])
def test_cocycle(name, rng):
    A = atl.build_atlas(fixtures.load(name))
    worst = 0.0
    for i in range(len(A)):
        for j in range(len(A)):
            for k in range(len(A)):
                if len({i, j, k}) == 3:
                    s = np.exp(0.5 * rng.normal(size=2)) * np.exp(2j * np.pi * rng.random(2))
                    worst = max(worst, atl.cocycle_residual(A, i, j, k, s))
    assert worst < 1e-8


def test_offsets_do_not_change_transitions(any_atlas):
    p = any_atlas.polytope
    other = atl.build_atlas(inflate(p, 3.0))
    assert other.polytope.offsets.tolist() != p.offsets.tolist()
    for key, Tm in any_atlas.transition_matrices().items():
        assert np.array_equal(Tm, other.transition_matrices()[key])


def test_torus_action(any_atlas, rng):
    q = any_atlas.quasilattice
    for c in any_atlas:
        s = rng.normal(size=len(c.active)) + 1j * rng.normal(size=len(c.active))
        np.testing.assert_array_equal(atl.torus_act(c, np.zeros(len(s)), s), s)
        for a in range(q.size):
            moved = atl.torus_act(c, q.generators[a], s)
            assert atl.same_model_point(c, moved, s, tol=1e-10) is not None
        Y = rng.normal(size=len(s))
        moved = atl.torus_act(c, 1j * Y, s)
        np.testing.assert_allclose(np.abs(moved),
                                   np.abs(s) * np.exp(-2 * np.pi * c.iso_inverse(Y)), rtol=1e-12)


def test_same_model_point(pentagon_atlas, interval_atlas, rng):
    c = pentagon_atlas[0]
    s = rng.normal(size=2) + 1j * rng.normal(size=2)
    g = atl.same_model_point(c, s, s)
    assert g is not None and g.is_identity()
    gen = c.gamma_gens[1]
    g = atl.same_model_point(c, s, gen.act(s))
    assert g is not None and g.equals(gen)
    S_ = chart_with(interval_atlas, (0,))
    assert atl.same_model_point(S_, np.array([1.0]), np.array([np.exp(1j * np.pi)])) is None


def test_chart_covering(any_atlas, rng):
    for z in sample_ambient(any_atlas.polytope, rng, 50):
        c = any_atlas.chart_for(z)
        assert c.contains(z)


def test_generic_points_have_trivial_stabiliser(any_atlas, rng):
    for c in any_atlas:
        s = rng.normal(size=len(c.active)) + 1j * rng.normal(size=len(c.active))
        assert atl.nontrivial_stabilizer(c, s) is None


def test_rational_orbifold_point():
    A = atl.build_atlas(fixtures.load("interval", s=1, t=2))
    N_ = chart_with(A, (1,))
    assert atl.nontrivial_stabilizer(N_, np.array([0.0])) is not None
    assert atl.nontrivial_stabilizer(N_, np.array([0.4 + 0.1j])) is None


@settings(max_examples=30, deadline=None)
@given(st.floats(0.3, 3.0), st.floats(0.3, 3.0))
def test_interval_slope_property(s, t):
    A = atl.build_atlas(fixtures.load("interval", s=s, t=t))
    assert atl.transition_matrix(A[0], A[1])[0, 0] == pytest.approx(-s / t, rel=1e-12)
    b = A.kernel.matrix[:, 0]
    assert b[1] / b[0] == pytest.approx(s / t, rel=1e-12)
