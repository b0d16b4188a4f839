"""Poisson engine: gradients, brackets, algebra checks, ranks."""

import numpy as np
import pytest

from zgeoflow.algebra import (
    casimir_m,
    hamiltonian_family,
    hamiltonian_integrable,
    hamiltonian_superintegrable,
    integral_extra_2,
    integral_extra_3,
    realize_generators,
)
from zgeoflow.brackets import (
    bracket_function,
    bracket_residual,
    check_algebra,
    check_involution,
    gradient,
    gradient_fd,
    independence_rank,
    poisson_bracket,
    sample_points,
)
from zgeoflow import dual
from zgeoflow.phase import PhaseFunction, PhasePoint, coordinate, momentum


def test_gradient_polynomial():
    f = PhaseFunction(2, lambda q, p: q[0] * q[0], "q1^2")
    g = gradient(f, PhasePoint([1.5, -0.3], [0.2, 0.9]))
    assert g.dq == pytest.approx([3.0, 0.0], abs=1e-15)
    assert g.dp == pytest.approx([0.0, 0.0], abs=1e-15)


def test_gradient_momentum_square():
    gen = realize_generators(1, 0.0)
    g = gradient(gen.j_plus, PhasePoint([0.4], [1.3]))
    assert g.dp == pytest.approx([2.6], abs=1e-15)
    assert g.dq == pytest.approx([0.0], abs=1e-15)


def test_exact_gradient_matches_fd_oracle():
    gen = realize_generators(2, 0.3)
    rng = np.random.default_rng(2)
    for _ in range(10):
        x = PhasePoint(rng.uniform(-1.5, 1.5, 2), rng.uniform(-1.5, 1.5, 2))
        ge = gradient(gen.j_plus, x).flat()
        gf = gradient_fd(gen.j_plus, x).flat()
        assert np.max(np.abs(ge - gf)) < 1e-6 * (1.0 + np.max(np.abs(ge)))


def test_canonical_pairs():
    q1, p1 = coordinate(2, 0), momentum(2, 0)
    q2 = coordinate(2, 1)
    x = PhasePoint([0.3, -1.2], [0.8, 0.1])
    assert poisson_bracket(q1, p1, x) == pytest.approx(1.0, abs=1e-15)
    assert poisson_bracket(q1, q2, x) == 0.0


def test_deformed_bracket_closes_on_j_three():
    z = 0.4
    gen = realize_generators(2, z)
    rng = np.random.default_rng(5)
    for _ in range(10):
        x = PhasePoint(rng.uniform(-1.5, 1.5, 2), rng.uniform(-1.5, 1.5, 2))
        lhs = poisson_bracket(gen.j_minus, gen.j_plus, x)
        assert abs(lhs - 4.0 * float(gen.j_three(x))) < 1e-9


def test_antisymmetry():
    z = 0.6
    gen = realize_generators(3, z)
    for x in sample_points(3, 20, seed=9):
        a = poisson_bracket(gen.j_three, gen.j_plus, x)
        b = poisson_bracket(gen.j_plus, gen.j_three, x)
        assert abs(a + b) < 1e-14 * max(1.0, abs(a))


def test_leibniz_rule():
    z = 0.3
    gen = realize_generators(2, z)
    f, g, h = gen.j_minus, gen.j_plus, gen.j_three
    fg = f * g
    for x in sample_points(2, 15, seed=4):
        lhs = poisson_bracket(fg, h, x)
        rhs = float(f(x)) * poisson_bracket(g, h, x) + float(g(x)) * poisson_bracket(
            f, h, x
        )
        assert abs(lhs - rhs) < 1e-10 * max(1.0, abs(lhs))


def test_jacobi_identity_nested():
    z = 0.3
    gen = realize_generators(2, z)
    f, g, h = gen.j_minus, gen.j_plus, gen.j_three
    fg = bracket_function(f, g)
    gh = bracket_function(g, h)
    hf = bracket_function(h, f)
    for x in sample_points(2, 8, seed=13):
        total = (
            poisson_bracket(fg, h, x)
            + poisson_bracket(gh, f, x)
            + poisson_bracket(hf, g, x)
        )
        assert abs(total) < 1e-7


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
@pytest.mark.parametrize("z", [-0.7, 0.0, 0.3, 1.0])
def test_bracket_relations_sampled(n, z):
    report = check_algebra(n, z, samples=30, seed=21)
    assert report.passed, report.to_text()


def test_check_algebra_report_fields():
    report = check_algebra(2, 0.3, samples=10, seed=1)
    text = report.to_text()
    assert "seed = 1" in text and "passed = True" in text
    with pytest.raises(ValueError):
        check_algebra(2, 0.3, samples=0)


def test_casimir_centrality_and_tower():
    z = 0.4
    for n in (2, 3, 4, 5):
        gen = realize_generators(n, z)
        cas = [casimir_m(m, n, z) for m in range(2, n + 1)]
        pts = sample_points(n, 10, seed=31)
        for c in cas:
            for gfun in gen.as_tuple():
                for x in pts:
                    assert bracket_residual(c, gfun, x) < 1e-9
        rep = check_involution(cas, samples=10, seed=31)
        assert rep.passed, rep.to_text()


def test_involution_of_integrable_sets():
    z = 0.3
    h = hamiltonian_integrable(3, z)
    c2, c3 = casimir_m(2, 3, z), casimir_m(3, 3, z)
    rep = check_involution([h, c2, c3], samples=15, seed=2)
    assert rep.passed
    # the superintegrable flow commutes with all four constants, and the two
    # triples {H, C2, C3} and {H, I2, I3} are each mutually in involution
    # (the five functions together cannot be: 5 > N on a 6D phase space)
    hs = hamiltonian_superintegrable(3, z)
    i2, i3 = integral_extra_2(z, 3), integral_extra_3(z, 3)
    for c in (c2, c3, i2, i3):
        for x in sample_points(3, 15, seed=2):
            assert bracket_residual(hs, c, x) < 1e-9
    rep = check_involution([hs, c2, c3], samples=15, seed=2)
    assert rep.passed, rep.to_text()
    rep = check_involution([hs, i2, i3], samples=15, seed=2)
    assert rep.passed, rep.to_text()
    for fam in (lambda s: 1.0 + s, dual.exp):
        hf = hamiltonian_family(3, z, fam)
        rep = check_involution([hf, c2, c3], samples=10, seed=2)
        assert rep.passed


def test_involution_flags_canonical_pair():
    rep = check_involution([coordinate(1, 0), momentum(1, 0)], samples=5, seed=0)
    assert not rep.passed
    assert rep.residuals[0, 1] == pytest.approx(1.0, abs=1e-14)
    # antisymmetric consistency of the report
    assert np.allclose(rep.residuals, rep.residuals.T)


def test_involution_arity_mismatch():
    with pytest.raises(ValueError):
        check_involution([coordinate(1, 0), coordinate(2, 0)])


def test_independence_rank_degenerate():
    q1 = coordinate(1, 0)
    q1sq = PhaseFunction(1, lambda q, p: q[0] * q[0], "q1^2")
    assert independence_rank([q1, q1sq], PhasePoint([1.0], [0.5])) == 1


def test_independence_rank_integrable_and_superintegrable():
    z = 0.3
    h = hamiltonian_integrable(3, z)
    hs = hamiltonian_superintegrable(3, z)
    c2, c3 = casimir_m(2, 3, z), casimir_m(3, 3, z)
    i2, i3 = integral_extra_2(z, 3), integral_extra_3(z, 3)
    for x in sample_points(3, 5, seed=77):
        assert independence_rank([h, c2, c3], x) == 3
        assert independence_rank([hs, c2, c3, i2, i3], x) == 5


def test_bracket_arity_mismatch():
    with pytest.raises(ValueError):
        poisson_bracket(coordinate(1, 0), coordinate(2, 0), PhasePoint([1.0], [1.0]))


def test_exact_vs_fd_brackets():
    z = 0.5
    gen = realize_generators(3, z)

    def bracket_fd(f, g, x):
        gf = gradient_fd(f, x)
        gg = gradient_fd(g, x)
        return float(np.dot(gf.dq, gg.dp) - np.dot(gf.dp, gg.dq))

    for x in sample_points(3, 8, seed=12):
        exact = poisson_bracket(gen.j_three, gen.j_plus, x)
        approx = bracket_fd(gen.j_three, gen.j_plus, x)
        assert abs(exact - approx) < 1e-6 * (1.0 + abs(exact))


def test_sample_points_reproducible_and_bounded():
    a = sample_points(3, 5, seed=42)
    b = sample_points(3, 5, seed=42)
    for x, y in zip(a, b):
        assert np.array_equal(x.q, y.q) and np.array_equal(x.p, y.p)
    assert all(np.max(np.abs(x.flat())) <= 2.0 for x in a)
