"""Curvature machinery against closed forms and classical test metrics."""

import math

import numpy as np
import pytest

from zgeoflow import dual
from zgeoflow import geometry as geo
from zgeoflow.algebra import hamiltonian_integrable, hamiltonian_superintegrable
from zgeoflow.phase import PhaseFunction, PhasePoint


def check_points(n, seed=0):
    rng = np.random.default_rng(seed)
    return [
        PhasePoint(rng.uniform(-1, 1, n), rng.uniform(-1, 1, n)) for _ in range(3)
    ]


def sphere_metric():
    return geo.DiagonalMetric(
        2, (lambda q: 1.0, lambda q: dual.sin(q[0]) ** 2), "sphere"
    )


def euclidean_metric(n):
    return geo.DiagonalMetric(n, tuple(lambda q: 1.0 for _ in range(n)), "flat")


def integrable_line_element(n, z):
    return geo.line_element_from_hamiltonian(
        hamiltonian_integrable(n, z), n, check_points(n)
    )


def superintegrable_line_element(n, z):
    return geo.line_element_from_hamiltonian(
        hamiltonian_superintegrable(n, z), n, check_points(n)
    )


def oracle_line_element_3d(z, q):
    """Term-by-term transcription of the variable-curvature 3D line element."""

    def coef(x):
        return 2 * z * x**2 / math.sinh(z * x**2) if z * x**2 != 0 else 2.0

    q1, q2, q3 = q
    e = math.exp
    return (
        coef(q1) * e(-z * q2**2) * e(-z * q3**2),
        coef(q2) * e(z * q1**2) * e(-z * q3**2),
        coef(q3) * e(z * q1**2) * e(z * q2**2),
    )


# --------------------------------------------------------------------------
# sign convention and classical metrics
# --------------------------------------------------------------------------


def test_unit_sphere_has_curvature_plus_one():
    g = sphere_metric()
    for theta in (0.4, 0.9, 1.4):
        assert geo.sectional_curvature(g, [theta, 0.3], 0, 1) == pytest.approx(
            1.0, abs=1e-12
        )
    assert geo.scalar_curvature(g, [0.8, 0.1]) == pytest.approx(2.0, abs=1e-12)


def test_euclidean_is_flat():
    g = euclidean_metric(3)
    q = [0.3, -0.2, 0.9]
    assert np.allclose(geo.christoffel(g, q), 0.0)
    assert np.allclose(geo.riemann(g, q), 0.0)
    assert geo.scalar_curvature(g, q) == 0.0


def test_hyperbolic_plane_negative_curvature():
    # upper half plane ds^2 = (dx^2 + dy^2)/y^2 with K = -1
    g = geo.DiagonalMetric(
        2, (lambda q: 1.0 / (q[1] * q[1]), lambda q: 1.0 / (q[1] * q[1])), "H2"
    )
    assert geo.sectional_curvature(g, [0.4, 1.7], 0, 1) == pytest.approx(
        -1.0, rel=1e-12
    )


# --------------------------------------------------------------------------
# metric extraction
# --------------------------------------------------------------------------


def test_flat_hamiltonian_gives_identity_metric():
    h = hamiltonian_integrable(3, 0.0)
    g = geo.metric_from_hamiltonian(h, 3, check_points(3))
    assert g.values([0.2, -0.7, 1.1]) == pytest.approx([1.0, 1.0, 1.0], abs=1e-14)


def test_line_element_matches_transcription():
    z = 0.3
    g = integrable_line_element(3, z)
    rng = np.random.default_rng(8)
    for _ in range(5):
        q = rng.uniform(-1, 1, 3)
        ref = oracle_line_element_3d(z, q)
        assert g.values(q) == pytest.approx(ref, rel=1e-12)


def test_superintegrable_metric_is_conformal_to_integrable():
    z = 0.4
    gi = integrable_line_element(3, z)
    gs = superintegrable_line_element(3, z)
    q = [0.5, -0.3, 0.8]
    factor = math.exp(-z * float(np.dot(q, q)))
    assert gs.values(q) == pytest.approx(gi.values(q) * factor, rel=1e-12)


def test_non_diagonal_hamiltonian_rejected():
    h = PhaseFunction(2, lambda q, p: 0.5 * (p[0] + p[1]) ** 2, "mixed")
    with pytest.raises(geo.NonKineticHamiltonianError):
        geo.metric_from_hamiltonian(h, 2, check_points(2))


def test_non_quadratic_hamiltonian_rejected():
    h = PhaseFunction(
        2, lambda q, p: 0.5 * (p[0] ** 2 + p[1] ** 2) + p[0] ** 4, "quartic"
    )
    with pytest.raises(geo.NonKineticHamiltonianError):
        geo.metric_from_hamiltonian(h, 2, check_points(2))


def test_degenerate_metric_detected():
    g = geo.DiagonalMetric(2, (lambda q: q[0], lambda q: 1.0), "deg")
    with pytest.raises(geo.MetricDegenerateError):
        g.values([0.0, 1.0])


# --------------------------------------------------------------------------
# connection and Riemann tensor
# --------------------------------------------------------------------------


def test_christoffel_symmetry_and_fd_oracle():
    z = 0.2
    g = integrable_line_element(2, z)
    q = [0.3, 0.5]
    gamma = geo.christoffel(g, q)
    assert np.allclose(gamma, np.swapaxes(gamma, 1, 2))

    # finite-difference oracle on the metric components
    h = 1e-6
    n = 2
    gval = g.values(q)
    d1 = np.zeros((n, n))
    for i in range(n):
        for k in range(n):
            up = list(q)
            dn = list(q)
            up[i] += h
            dn[i] -= h
            d1[i, k] = (g.components[k](up) - g.components[k](dn)) / (2 * h)
    for k in range(n):
        for i in range(n):
            for j in range(n):
                term = 0.0
                if k == j:
                    term += d1[i, k]
                if k == i:
                    term += d1[j, k]
                if i == j:
                    term -= d1[k, i]
                assert gamma[k, i, j] == pytest.approx(
                    term / (2 * gval[k]), rel=2e-9, abs=1e-9
                )


def test_riemann_against_fd_christoffel_oracle():
    """Independent route: difference the exact Christoffels numerically and
    rebuild the Riemann tensor; must agree with the analytic assembly."""
    z = 0.3
    g = integrable_line_element(3, z)
    q = [0.4, 0.2, 0.6]
    n = 3
    h = 1e-5
    dgamma = np.zeros((n, n, n, n))  # dgamma[i, l, j, k] = d_i Gamma^l_{jk}
    for i in range(n):
        up, dn = list(q), list(q)
        up[i] += h
        dn[i] -= h
        dgamma[i] = (geo.christoffel(g, up) - geo.christoffel(g, dn)) / (2 * h)
    gamma = geo.christoffel(g, q)
    riem_fd = np.zeros((n, n, n, n))
    for l in range(n):
        for k in range(n):
            for i in range(n):
                for j in range(n):
                    val = dgamma[i, l, j, k] - dgamma[j, l, i, k]
                    for m in range(n):
                        val += gamma[l, i, m] * gamma[m, j, k]
                        val -= gamma[l, j, m] * gamma[m, i, k]
                    riem_fd[l, k, i, j] = val
    assert np.max(np.abs(geo.riemann(g, q) - riem_fd)) < 1e-6


def test_riemann_symmetries_and_bianchi():
    z = 0.3
    g = integrable_line_element(3, z)
    rng = np.random.default_rng(3)
    for _ in range(3):
        q = rng.uniform(-1, 1, 3)
        low = geo.riemann_covariant(g, q)
        assert np.max(np.abs(low + np.swapaxes(low, 0, 1))) < 1e-7
        assert np.max(np.abs(low + np.swapaxes(low, 2, 3))) < 1e-7
        assert np.max(np.abs(low - np.transpose(low, (2, 3, 0, 1)))) < 1e-7
        up = geo.riemann(g, q)
        bianchi = up + np.transpose(up, (0, 3, 1, 2)) + np.transpose(up, (0, 2, 3, 1))
        assert np.max(np.abs(bianchi)) < 1e-7


# --------------------------------------------------------------------------
# curvature of the deformed families
# --------------------------------------------------------------------------


@pytest.mark.parametrize("z", [-0.5, 0.3, 1.0])
def test_variable_curvature_closed_forms(z):
    g = integrable_line_element(3, z)
    rng = np.random.default_rng(17)
    for _ in range(6):
        q = rng.uniform(-1, 1, 3)
        sect, scal = geo.curvature_summary(g, q)
        ref = geo.variable_curvature_sectionals(z, q)
        for key in sect:
            assert sect[key] == pytest.approx(ref[key], rel=1e-6, abs=1e-9)
        ref_scal = geo.variable_curvature_scalar(z, q)
        assert scal == pytest.approx(ref_scal, rel=1e-6, abs=1e-9)
        assert scal == pytest.approx(2.0 * sum(sect.values()), abs=1e-7)


def test_sectional_vanishes_at_origin():
    g = integrable_line_element(3, 0.3)
    assert geo.sectional_curvature(g, [1e-8, 1e-8, 1e-8], 0, 1) == pytest.approx(
        0.0, abs=1e-6
    )


def test_flat_limit_zero_curvature():
    g = integrable_line_element(3, 0.0)
    q = [0.4, 0.2, 0.6]
    assert np.max(np.abs(geo.riemann(g, q))) < 1e-10
    assert abs(geo.scalar_curvature(g, q)) < 1e-10


@pytest.mark.parametrize("z", [-0.5, 0.3, 1.0])
def test_constant_curvature_family(z):
    g = superintegrable_line_element(3, z)
    rng = np.random.default_rng(23)
    vals = []
    for _ in range(5):
        q = rng.uniform(-1, 1, 3)
        sect, scal = geo.curvature_summary(g, q)
        vals.extend(sect.values())
        assert scal == pytest.approx(6.0 * z, abs=1e-8)
    assert np.std(vals) < 1e-8
    assert np.mean(vals) == pytest.approx(z, abs=1e-8)


def test_two_dimensional_curvatures():
    z = 0.5
    gi = integrable_line_element(2, z)
    # frozen: -0.5 sinh(0.5 * 0.25) with mpmath at 50 digits
    assert geo.gaussian_curvature_2d(gi, [0.3, 0.4]) == pytest.approx(
        -0.06266288762055773, rel=1e-8
    )
    assert geo.gaussian_curvature_variable_2d(z, [0.3, 0.4]) == pytest.approx(
        -0.06266288762055773, rel=1e-15
    )
    assert geo.gaussian_curvature_2d(gi, [0.0, 0.0]) == pytest.approx(0.0, abs=1e-8)
    gs = superintegrable_line_element(2, z)
    for q in ([0.3, 0.4], [0.7, -0.2]):
        assert geo.gaussian_curvature_2d(gs, q) == pytest.approx(z, abs=1e-8)
    with pytest.raises(ValueError):
        geo.gaussian_curvature_2d(integrable_line_element(3, z), [0.1, 0.2, 0.3])


def test_lorentzian_metric_supported():
    # 2D de Sitter-like diagonal metric with one negative component
    g = geo.DiagonalMetric(
        2,
        (lambda q: 1.0, lambda q: -dual.sinh(q[0]) ** 2),
        "lorentzian",
    )
    assert g.signature([0.8, 0.3]) == (1, -1)
    k = geo.sectional_curvature(g, [0.8, 0.3], 0, 1)
    assert k == pytest.approx(-1.0, rel=1e-10)


def test_rescaled_metric_scales_curvature_inversely():
    z = 0.3
    g = geo.metric_from_hamiltonian(
        hamiltonian_integrable(3, z), 3, check_points(3)
    )
    q = [0.4, 0.2, 0.6]
    k_base = geo.sectional_curvature(g, q, 0, 1)
    k_doubled = geo.sectional_curvature(g.rescaled(2.0), q, 0, 1)
    assert k_doubled == pytest.approx(k_base / 2.0, rel=1e-12)
