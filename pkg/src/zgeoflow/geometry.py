"""Diagonal metrics, Christoffel symbols, Riemann tensor, curvatures.

Metric components are position functions built on :mod:`zgeoflow.dual`
primitives, so first and second derivatives reuse the same exact
differentiation stack as the Poisson machinery.

Sign conventions are fixed so that the round unit 2-sphere has sectional
curvature +1.  Lorentzian signatures are supported throughout: nothing
assumes positive definiteness, only non-degeneracy (|g_ii| > 1e-12).

Normalization: :func:`metric_from_hamiltonian` returns the kinetic metric of
H = (1/2) sum a_i(q) p_i^2, i.e. g_ii = 1/a_i.  The line element
conventionally associated with such a flow is ds^2 = 2 T dt^2, twice that
metric; :func:`line_element_from_hamiltonian` returns the doubled version,
and the closed-form curvature references below apply to it.  Curvature
scales inversely with a constant metric factor.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import dual
from .phase import PhaseFunction, PhasePoint

#: metric components with magnitude below this are treated as degenerate
DEGENERACY_CUTOFF = 1e-12


class MetricDegenerateError(ValueError):
    """A diagonal metric component vanished inside the requested domain."""


class NonKineticHamiltonianError(ValueError):
    """Hamiltonian is not exactly quadratic and diagonal in momenta."""


@dataclass(frozen=True)
class DiagonalMetric:
    """Position-dependent diagonal metric g = diag(g_11(q), ..., g_NN(q)).

    ``components[i]`` maps a length-N sequence of generic scalars to g_ii.
    """

    dim: int
    components: tuple
    label: str = ""

    def values(self, q) -> np.ndarray:
        g = np.array([float(c(list(q))) for c in self.components])
        if np.any(np.abs(g) < DEGENERACY_CUTOFF):
            raise MetricDegenerateError(f"metric {self.label} degenerate at q={q}")
        return g

    def signature(self, q) -> tuple:
        return tuple(int(np.sign(v)) for v in self.values(q))

    def rescaled(self, factor: float) -> "DiagonalMetric":
        comps = tuple(
            (lambda c: (lambda qq: factor * c(qq)))(c) for c in self.components
        )
        return DiagonalMetric(self.dim, comps, f"{factor}*{self.label}")


def _momentum_hessian(h: PhaseFunction, q, p) -> np.ndarray:
    """Exact Hessian of h in the momenta at the given point."""
    n = h.arity
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i, n):
            ti = dual.fresh_tag()
            tj = dual.fresh_tag()
            ps = list(p)
            ps[i] = dual.Dual(ti, ps[i], 1.0)
            ps[j] = dual.Dual(tj, ps[j], 1.0)  # wraps the ti seed when j == i
            val = h.raw(list(q), ps)
            out[i, j] = out[j, i] = float(
                dual.primal(dual.dual_part(dual.dual_part(val, tj), ti))
            )
    return out


def metric_from_hamiltonian(
    h: PhaseFunction,
    n: int,
    check_points: Sequence[PhasePoint],
    tolerance: float = 1e-10,
) -> DiagonalMetric:
    """Extract g_ii(q) = 1 / (d^2 h / dp_i^2 at p = 0) from a kinetic Hamiltonian.

    The Hamiltonian must be exactly quadratic and diagonal in the momenta;
    this is verified at every check point and violations are rejected with
    the failing residual.
    """
    if h.arity != n:
        raise ValueError("Hamiltonian arity does not match requested dimension")
    for x in check_points:
        hess = _momentum_hessian(h, x.q, x.p)
        off = np.max(np.abs(hess - np.diag(np.diag(hess))))
        if off >= tolerance:
            raise NonKineticHamiltonianError(
                f"mixed momentum Hessian entry {off:.3e} exceeds {tolerance:.1e}"
            )
        resid = abs(float(h(x)) - 0.5 * float(np.dot(np.diag(hess), x.p**2)))
        if resid >= tolerance:
            raise NonKineticHamiltonianError(
                f"non-quadratic momentum dependence, residual {resid:.3e}"
            )

    def make_component(i):
        def g_ii(q):
            ti = dual.fresh_tag()
            tj = dual.fresh_tag()
            p = [0.0] * n
            p[i] = dual.Dual(tj, dual.Dual(ti, 0.0, 1.0), 1.0)
            val = h.raw(list(q), p)
            a_i = dual.dual_part(dual.dual_part(val, tj), ti)
            return 1.0 / a_i

        return g_ii

    comps = tuple(make_component(i) for i in range(n))
    return DiagonalMetric(n, comps, f"g[{h.label}]")


def line_element_from_hamiltonian(
    h: PhaseFunction, n: int, check_points: Sequence[PhasePoint]
) -> DiagonalMetric:
    """The line-element metric ds^2 = 2 T dt^2 of a kinetic Hamiltonian."""
    return metric_from_hamiltonian(h, n, check_points).rescaled(2.0)


def _component_derivatives(g: DiagonalMetric, q):
    """g values, first partials d1[i][k] = d_i g_kk and second partials
    d2[i][j][k] = d_i d_j g_kk, all exact.

    The fresher (outer) tag is always extracted first; for i = j the inner
    seed is wrapped by the outer one directly.
    """
    n = g.dim
    q = [float(v) for v in q]
    gval = g.values(q)
    d1 = np.zeros((n, n))
    d2 = np.zeros((n, n, n))
    for k, comp in enumerate(g.components):
        for i in range(n):
            d1[i, k] = float(dual.primal(dual.partial(comp, q, i)))
            for j in range(i, n):
                ti = dual.fresh_tag()
                tj = dual.fresh_tag()
                qs = list(q)
                qs[i] = dual.Dual(ti, q[i], 1.0)
                qs[j] = dual.Dual(tj, qs[j], 1.0)
                val = comp(qs)
                dd = dual.primal(dual.dual_part(dual.dual_part(val, tj), ti))
                d2[i, j, k] = d2[j, i, k] = float(dd)
    return gval, d1, d2


def christoffel(g: DiagonalMetric, q) -> np.ndarray:
    """Levi-Civita connection coefficients Gamma^k_{ij} for a diagonal metric."""
    n = g.dim
    gval, d1, _ = _component_derivatives(g, q)
    gamma = np.zeros((n, n, n))
    for k in range(n):
        inv2 = 0.5 / gval[k]
        for i in range(n):
            for j in range(n):
                term = 0.0
                if k == j:
                    term += d1[i, k]
                if k == i:
                    term += d1[j, k]
                if i == j:
                    term -= d1[k, i]
                gamma[k, i, j] = inv2 * term
    return gamma


def riemann(g: DiagonalMetric, q) -> np.ndarray:
    """Riemann tensor R^l_{kij} = d_i G^l_{jk} - d_j G^l_{ik} + G G - G G."""
    n = g.dim
    gval, d1, d2 = _component_derivatives(g, q)
    gamma = np.zeros((n, n, n))
    dgamma = np.zeros((n, n, n, n))  # dgamma[i, l, j, k] = d_i Gamma^l_{jk}
    for l in range(n):
        inv2 = 0.5 / gval[l]
        for j in range(n):
            for k in range(n):
                term = 0.0
                if l == k:
                    term += d1[j, l]
                if l == j:
                    term += d1[k, l]
                if j == k:
                    term -= d1[l, j]
                gamma[l, j, k] = inv2 * term
    for i in range(n):
        for l in range(n):
            for j in range(n):
                for k in range(n):
                    term = 0.0
                    if l == k:
                        term += d2[i, j, l]
                    if l == j:
                        term += d2[i, k, l]
                    if j == k:
                        term -= d2[i, l, j]
                    dgamma[i, l, j, k] = (
                        0.5 * term / gval[l]
                        - gamma[l, j, k] * d1[i, l] / gval[l]
                    )
    riem = np.zeros((n, n, n, n))  # R^l_{kij}
    for l in range(n):
        for k in range(n):
            for i in range(n):
                for j in range(n):
                    val = dgamma[i, l, j, k] - dgamma[j, l, i, k]
                    for m in range(n):
                        val += gamma[l, i, m] * gamma[m, j, k]
                        val -= gamma[l, j, m] * gamma[m, i, k]
                    riem[l, k, i, j] = val
    return riem


def riemann_covariant(g: DiagonalMetric, q) -> np.ndarray:
    """Fully lowered Riemann tensor R_{lkij} = g_ll R^l_{kij}."""
    gval = g.values(q)
    return gval[:, None, None, None] * riemann(g, q)


def sectional_curvature(g: DiagonalMetric, q, i: int, j: int) -> float:
    """Sectional curvature of the coordinate 2-plane (i, j).

    K_ij = R_{ijij} / (g_ii g_jj); the unit 2-sphere gives +1.
    """
    if i == j:
        raise ValueError("sectional curvature needs two distinct directions")
    gval = g.values(q)
    riem = riemann(g, q)
    r_ijij = gval[i] * riem[i, j, i, j]
    return float(r_ijij / (gval[i] * gval[j]))


def sectional_curvatures(g: DiagonalMetric, q) -> dict:
    """All coordinate-plane sectional curvatures {(i, j): K_ij} with i < j."""
    gval = g.values(q)
    riem = riemann(g, q)
    out = {}
    for i in range(g.dim):
        for j in range(i + 1, g.dim):
            out[(i, j)] = float(riem[i, j, i, j] / gval[j])
    return out


def scalar_curvature(g: DiagonalMetric, q) -> float:
    """Ricci scalar K = g^{ab} R_ab; equals 2 * sum K_ij for 3D diagonal g."""
    gval = g.values(q)
    riem = riemann(g, q)
    n = g.dim
    out = 0.0
    for k in range(n):
        ricci_kk = sum(riem[l, k, l, k] for l in range(n))
        out += ricci_kk / gval[k]
    return float(out)


def curvature_summary(g: DiagonalMetric, q):
    """All sectional curvatures and the scalar, from one Riemann evaluation."""
    gval = g.values(q)
    riem = riemann(g, q)
    n = g.dim
    sect = {}
    for i in range(n):
        for j in range(i + 1, n):
            sect[(i, j)] = float(riem[i, j, i, j] / gval[j])
    scal = 0.0
    for k in range(n):
        ricci_kk = sum(riem[l, k, l, k] for l in range(n))
        scal += ricci_kk / gval[k]
    return sect, float(scal)


def gaussian_curvature_2d(g: DiagonalMetric, q) -> float:
    """The single sectional curvature of a 2D diagonal metric."""
    if g.dim != 2:
        raise ValueError("Gaussian curvature is defined here for 2D metrics only")
    return sectional_curvature(g, q, 0, 1)


# ---------------------------------------------------------------------------
# closed-form curvature references for the deformed geodesic families
# ---------------------------------------------------------------------------


def variable_curvature_sectionals(z: float, q) -> dict:
    """Closed-form K_12, K_13, K_23 of the 3D variable-curvature line element.

    Valid for the line element of the integrable flow (see module docstring
    for the normalization).  The K_23 coefficient of exp(2 z |q|^2) is -1,
    the unique value consistent with the scalar identity
    K = 2 (K_12 + K_13 + K_23) = -5 z sinh(z |q|^2).
    """
    q1, q2, q3 = (float(v) for v in q)
    qq = q1 * q1 + q2 * q2 + q3 * q3
    e = np.exp
    k12 = z / 4.0 * e(-z * qq) * (1.0 + e(2 * z * q3 * q3) - 2.0 * e(2 * z * qq))
    k13 = (
        z
        / 4.0
        * e(-z * qq)
        * (
            2.0
            - e(2 * z * q3 * q3)
            + e(2 * z * q2 * q2) * e(2 * z * q3 * q3)
            - 2.0 * e(2 * z * qq)
        )
    )
    k23 = (
        z
        / 4.0
        * e(-z * qq)
        * (2.0 - e(2 * z * q2 * q2) * e(2 * z * q3 * q3) - e(2 * z * qq))
    )
    return {(0, 1): float(k12), (0, 2): float(k13), (1, 2): float(k23)}


def variable_curvature_scalar(z: float, q) -> float:
    """Closed-form scalar curvature K = -5 z sinh(z |q|^2) of the same family."""
    qq = float(np.dot(q, q))
    return float(-5.0 * z * np.sinh(z * qq))


def gaussian_curvature_variable_2d(z: float, q) -> float:
    """Closed-form Gaussian curvature -z sinh(z (q1^2 + q2^2)) in 2D."""
    qq = float(q[0]) ** 2 + float(q[1]) ** 2
    return float(-z * np.sinh(z * qq))
