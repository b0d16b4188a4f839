"""Signed-curvature trigonometry and geodesic polar charts.

The chart relations linking Cartesian realization coordinates q to geodesic
polar coordinates (rho, theta, phi) are

    cosh^2(l1 rho)                                  = e^{2z q^2}
    sinh^2(l1 rho) cos^2(l2 theta)                  = e^{2zq1^2} e^{2zq2^2} (e^{2zq3^2}-1)
    sinh^2(l1 rho) sin^2(l2 theta) cos^2(phi)       = e^{2zq1^2} (e^{2zq2^2}-1)
    sinh^2(l1 rho) sin^2(l2 theta) sin^2(phi)       = e^{2zq1^2} - 1

with z = l1^2 and kappa2 = l2^2 (either sign; kappa2 = +1 is the Riemannian
family, kappa2 = -1 the relativistic one).  Everything is written through the
signed-curvature functions kappa_sin / kappa_cos so real and imaginary l1, l2
share one code path.

Branch policy: principal branches everywhere; Cartesian preimages live in the
positive octant (the relations only determine q_i^2).  For kappa2 < 0 the
preimage has q1^2, q2^2 < 0, so no real Cartesian point is in-chart:
real input is rejected with the violated relation, while
:func:`polar_to_cart` continues to the complex octant (q1, q2 pure
imaginary), under which every identity below still holds exactly.

Momentum normalization: ``"canonical"`` momenta come from the transpose
inverse Jacobian of the position map and satisfy the fundamental brackets
exactly.  ``"chart"`` momenta are twice the canonical ones; in that
normalization the polar Hamiltonian equals exactly twice the Cartesian one
and the polar constants equal 4 (resp. 4 kappa2) times the Cartesian
Casimirs, matching the line-element (factor 2) metric convention of
:mod:`zgeoflow.geometry`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import dual
from .phase import EvaluationDomainError, PhaseFunction, PhasePoint

#: |z| below this selects the analytic flat-limit chart
FLAT_Z_CUTOFF = 1e-13

#: series cutoff for the unified sin/sinh kernels
_SERIES_CUTOFF = 1e-4

#: chart momenta are this multiple of canonical ones
CHART_MOMENTUM_FACTOR = 2.0


class OutOfChartError(ValueError):
    """Input outside the chart domain; ``relation`` is the 1-based index of
    the violated chart relation when applicable."""

    def __init__(self, message, relation=None):
        super().__init__(message)
        self.relation = relation


@dataclass(frozen=True)
class SpaceSignature:
    """The signed pair (kappa1 = z, kappa2) selecting one of the six spaces."""

    kappa1: float
    kappa2: float

    def __post_init__(self):
        if self.kappa2 == 0.0:
            raise ValueError("kappa2 must be nonzero")

    @property
    def family(self) -> str:
        riem = self.kappa2 > 0
        if self.kappa1 > 0:
            return "hyperbolic" if riem else "de Sitter"
        if self.kappa1 < 0:
            return "sphere" if riem else "anti-de Sitter"
        return "Euclidean" if riem else "Minkowski"


# ---------------------------------------------------------------------------
# signed-curvature trigonometry
# ---------------------------------------------------------------------------


def _sin_kernel(u):
    """sin(sqrt(u))/sqrt(u), analytic in u (sinh branch for u < 0)."""
    up = dual.primal(u)
    if abs(up) < _SERIES_CUTOFF:
        return 1.0 - u * (1.0 / 6.0 - u * (1.0 / 120.0 - u / 5040.0))
    if up.real > 0:
        v = dual.sqrt(u)
        return dual.sin(v) / v
    v = dual.sqrt(-u)
    return dual.sinh(v) / v


def _cos_kernel(u):
    """cos(sqrt(u)), analytic in u (cosh branch for u < 0)."""
    up = dual.primal(u)
    if abs(up) < _SERIES_CUTOFF:
        return 1.0 - u * (0.5 - u * (1.0 / 24.0 - u / 720.0))
    if up.real > 0:
        return dual.cos(dual.sqrt(u))
    return dual.cosh(dual.sqrt(-u))


def kappa_sin(kappa: float, x):
    """sin(sqrt(kappa) x)/sqrt(kappa), smooth in kappa, equal to x at kappa=0."""
    return x * _sin_kernel(kappa * x * x)


def kappa_cos(kappa: float, x):
    """cos(sqrt(kappa) x), smooth in kappa, equal to 1 at kappa=0."""
    return _cos_kernel(kappa * x * x)


def kappa_tan(kappa: float, x):
    """kappa_sin / kappa_cos."""
    return kappa_sin(kappa, x) / kappa_cos(kappa, x)


# ---------------------------------------------------------------------------
# chart maps (generic scalars: float / complex / dual)
# ---------------------------------------------------------------------------


def _real(x):
    return dual.primal(x).real


def _as_complex(x):
    if isinstance(x, dual.Dual):
        return dual.Dual(x.tag, _as_complex(x.re), _as_complex(x.du))
    return complex(x)


def _cart_to_polar_generic(q, z: float, kappa2: float):
    w = [qi * qi for qi in q]
    qq = w[0] + w[1] + w[2]
    if abs(_real(qq)) == 0.0:
        return [0.0, 0.0, 0.0]

    if abs(z) < FLAT_Z_CUTOFF:
        rho = dual.sqrt(2.0 * qq)
        ks2 = (w[0] + w[1]) / (kappa2 * qq)
        if _real(ks2) < -1e-12:
            raise OutOfChartError(
                "sin^2(l2 theta)/kappa2 < 0 (wrong relativistic octant)", relation=3
            )
        ratio_phi = None if abs(_real(w[1])) == 0.0 else w[0] / w[1]
    else:
        e1 = dual.exp(2.0 * z * w[0])
        e2 = dual.exp(2.0 * z * w[1])
        e3 = dual.exp(2.0 * z * w[2])
        s = e1 * e2 * e3
        sp = _real(s)
        if z > 0 and sp < 1.0:
            raise OutOfChartError("e^{2z q^2} < 1 on the z > 0 branch", relation=1)
        if z < 0 and not (0.0 < sp <= 1.0):
            raise OutOfChartError("e^{2z q^2} outside (0, 1] on the z < 0 branch", relation=1)
        a = s - 1.0  # sinh^2(l1 rho)
        if z > 0:
            rho = dual.acosh(dual.sqrt(s)) / np.sqrt(z)
        else:
            rho = dual.acos(dual.sqrt(s)) / np.sqrt(-z)
        c2 = e1 * e2 * (e3 - 1.0) / a
        if _real(c2) < -1e-12:
            raise OutOfChartError("cos^2(l2 theta) < 0", relation=2)
        ks2 = (e1 * e2 - 1.0) / (a * kappa2)
        if _real(ks2) < -1e-12:
            raise OutOfChartError(
                "sin^2(l2 theta)/kappa2 < 0 (wrong relativistic octant)", relation=3
            )
        num = e1 - 1.0
        den = e1 * (e2 - 1.0)
        ratio_phi = None if abs(_real(den)) < 1e-300 else num / den
        if ratio_phi is not None and _real(ratio_phi) < -1e-12:
            raise OutOfChartError("tan^2(phi) < 0 (wrong relativistic octant)", relation=4)

    if kappa2 > 0:
        arg = dual.sqrt(kappa2 * ks2)
        theta = dual.asin(arg) / np.sqrt(kappa2)
    else:
        arg = dual.sqrt(-kappa2 * ks2)
        theta = dual.asinh(arg) / np.sqrt(-kappa2)
    phi = np.pi / 2 if ratio_phi is None else dual.atan(dual.sqrt(ratio_phi))
    return [rho, theta, phi]


def _polar_to_cart_generic(x, z: float, kappa2: float):
    rho, theta, phi = x
    if z < -FLAT_Z_CUTOFF and _real(rho) * np.sqrt(-z) >= np.pi / 2:
        raise OutOfChartError(
            "rho outside the principal branch for z < 0", relation=1
        )
    sin_phi = dual.sin(phi)
    if abs(z) < FLAT_Z_CUTOFF:
        t = kappa2 * kappa_sin(kappa2, theta) ** 2
        w1 = rho * rho * t * sin_phi * sin_phi / 2.0
        w12 = rho * rho * t / 2.0
        ws = rho * rho / 2.0
    else:
        a = z * kappa_sin(-z, rho) ** 2          # sinh^2(l1 rho)
        t = kappa2 * kappa_sin(kappa2, theta) ** 2  # sin^2(l2 theta)
        args = (
            1.0 + a * t * sin_phi * sin_phi,
            1.0 + a * t,
            kappa_cos(-z, rho) ** 2,
        )
        for idx, arg in enumerate(args):
            if _real(arg) <= 0.0:
                raise OutOfChartError(
                    "logarithm of non-positive value (outside chart)",
                    relation=(4, 3, 1)[idx],
                )
        w1 = dual.log(args[0]) / (2.0 * z)
        w12 = dual.log(args[1]) / (2.0 * z)
        ws = dual.log(args[2]) / (2.0 * z)
    w = [w1, w12 - w1, ws - w12]
    out = []
    for i, wi in enumerate(w):
        if _real(wi) < 0.0:
            if kappa2 > 0:
                raise OutOfChartError(
                    f"q_{i + 1}^2 < 0 has no real preimage on the kappa2 > 0 branch",
                    relation=4 - i,
                )
            out.append(dual.sqrt(_as_complex(wi)))
        else:
            out.append(dual.sqrt(wi))
    return out


def cart_to_polar(q, z: float, kappa2: float = 1.0) -> np.ndarray:
    """Solve the chart relations for (rho, theta, phi) on the principal branch."""
    q = list(np.asarray(q))
    if len(q) != 3:
        raise ValueError("the geodesic polar chart is three-dimensional")
    return np.array(_cart_to_polar_generic(q, float(z), float(kappa2)))


def polar_to_cart(x, z: float, kappa2: float = 1.0) -> np.ndarray:
    """Positive-octant Cartesian preimage of a polar point.

    For kappa2 < 0 the first two components are pure imaginary (complex
    octant); the squared coordinates remain real.
    """
    x = list(np.asarray(x))
    if len(x) != 3:
        raise ValueError("the geodesic polar chart is three-dimensional")
    return np.array(_polar_to_cart_generic(x, float(z), float(kappa2)))


def chart_relation_residuals(q, x, z: float, kappa2: float) -> np.ndarray:
    """Absolute residuals of the four chart relations at matched (q, x)."""
    q = np.asarray(q)
    rho, theta, phi = (complex(v) for v in np.asarray(x))
    e = [np.exp(2.0 * z * complex(qi) ** 2) for qi in q]
    a = z * complex(kappa_sin(-z, rho)) ** 2
    t = kappa2 * complex(kappa_sin(kappa2, theta)) ** 2
    c2 = complex(kappa_cos(kappa2, theta)) ** 2
    lhs = np.array(
        [
            complex(kappa_cos(-z, rho)) ** 2,
            a * c2,
            a * t * np.cos(phi) ** 2,
            a * t * np.sin(phi) ** 2,
        ]
    )
    rhs = np.array(
        [
            e[0] * e[1] * e[2],
            e[0] * e[1] * (e[2] - 1.0),
            e[0] * (e[1] - 1.0),
            e[0] - 1.0,
        ]
    )
    return np.abs(lhs - rhs)


def position_jacobian(x, z: float, kappa2: float) -> np.ndarray:
    """Exact Jacobian d(cartesian)/d(polar) of :func:`polar_to_cart` at x."""
    x = [complex(v) if isinstance(v, complex) else float(v) for v in np.asarray(x)]
    cols = []
    cplx = False
    for j in range(3):
        tag = dual.fresh_tag()
        seeded = list(x)
        seeded[j] = dual.Dual(tag, x[j], 1.0)
        img = _polar_to_cart_generic(seeded, float(z), float(kappa2))
        col = [dual.dual_part(v, tag) for v in img]
        cplx = cplx or any(isinstance(c, complex) for c in col)
        cols.append(col)
    jac = np.array(cols, dtype=complex if cplx else float).T
    if not np.all(np.isfinite(jac)):
        raise OutOfChartError("singular Jacobian (chart boundary)")
    return jac


@dataclass(frozen=True)
class PolarPoint:
    """A point of the polar chart with its conjugate momenta."""

    rho: float
    theta: float
    phi: float
    p_rho: float
    p_theta: float
    p_phi: float

    def position(self) -> np.ndarray:
        return np.array([self.rho, self.theta, self.phi])

    def momentum(self) -> np.ndarray:
        return np.array([self.p_rho, self.p_theta, self.p_phi])

    def as_phase_point(self) -> PhasePoint:
        return PhasePoint(self.position(), self.momentum())


def _check_normalization(normalization):
    if normalization not in ("canonical", "chart"):
        raise ValueError("normalization must be 'canonical' or 'chart'")


def transform_to_polar(
    point: PhasePoint, z: float, kappa2: float, normalization: str = "canonical"
) -> PolarPoint:
    """Map a Cartesian phase point into the polar chart.

    Canonical momenta come from the transpose inverse Jacobian of the
    position map; chart momenta are CHART_MOMENTUM_FACTOR times those.
    """
    _check_normalization(normalization)
    if point.dim != 3:
        raise ValueError("the geodesic polar chart is three-dimensional")
    x = cart_to_polar(point.q, z, kappa2)
    if np.allclose(point.p, 0.0):
        mom = np.zeros(3)
    else:
        jac = position_jacobian(x, z, kappa2)
        if abs(np.linalg.det(jac)) < 1e-12:
            raise OutOfChartError("singular Jacobian (chart boundary)")
        mom = jac.T @ point.p
        if normalization == "chart":
            mom = CHART_MOMENTUM_FACTOR * mom
    vals = []
    for v in [*x, *mom]:
        v = complex(v) if np.iscomplexobj(v) else v
        if isinstance(v, complex) and abs(v.imag) <= 1e-12 * max(1.0, abs(v.real)):
            v = v.real  # complex-octant outputs are real up to roundoff
        vals.append(v)
    return PolarPoint(*vals)


def transform_to_cartesian(
    polar: PolarPoint, z: float, kappa2: float, normalization: str = "canonical"
) -> PhasePoint:
    """Inverse of :func:`transform_to_polar` (complex octant for kappa2 < 0)."""
    _check_normalization(normalization)
    x = polar.position()
    q = polar_to_cart(x, z, kappa2)
    mom = polar.momentum().astype(complex if np.iscomplexobj(q) else float)
    if normalization == "chart":
        mom = mom / CHART_MOMENTUM_FACTOR
    if np.allclose(mom, 0.0):
        p = np.zeros_like(q)
    else:
        jac = position_jacobian(x, z, kappa2)
        if abs(np.linalg.det(jac)) < 1e-12:
            raise OutOfChartError("singular Jacobian (chart boundary)")
        p = np.linalg.solve(jac.T.astype(complex), mom.astype(complex))
        if not np.iscomplexobj(q):
            p = p.real
    return PhasePoint(q, p)


def polar_chart_functions(z: float, kappa2: float):
    """The six polar chart variables as functions on the Cartesian phase space.

    Returns (rho, theta, phi, p_rho, p_theta, p_phi) as PhaseFunctions with
    canonical momentum normalization, suitable for verifying the fundamental
    brackets in the original chart.
    """
    names = ("rho", "theta", "phi", "p_rho", "p_theta", "p_phi")

    def make_position(a):
        def fn(q, p):
            return _cart_to_polar_generic(list(q), z, kappa2)[a]

        return fn

    def make_momentum(a):
        def fn(q, p):
            x = _cart_to_polar_generic(list(q), z, kappa2)
            tag = dual.fresh_tag()
            seeded = list(x)
            seeded[a] = dual.Dual(tag, x[a], 1.0)
            img = _polar_to_cart_generic(seeded, z, kappa2)
            total = 0.0
            for i in range(3):
                total = total + dual.dual_part(img[i], tag) * p[i]
            return total

        return fn

    fns = [make_position(a) for a in range(3)] + [make_momentum(a) for a in range(3)]
    return tuple(PhaseFunction(3, f, n) for f, n in zip(fns, names))


def fundamental_bracket_residuals(
    point: PhasePoint, z: float, kappa2: float
) -> np.ndarray:
    """|{u_a, u_b} - canonical| for the six polar chart variables at a point."""
    from .brackets import poisson_bracket

    u = polar_chart_functions(z, kappa2)
    omega = np.zeros((6, 6))
    for a in range(3):
        omega[a, a + 3] = 1.0
        omega[a + 3, a] = -1.0
    res = np.zeros((6, 6))
    for a in range(6):
        for b in range(a + 1, 6):
            val = poisson_bracket(u[a], u[b], point)
            res[a, b] = res[b, a] = abs(val - omega[a, b])
    return res


# ---------------------------------------------------------------------------
# radial reparametrization rho <-> r
# ---------------------------------------------------------------------------


def rho_to_r(rho: float, z: float) -> float:
    """The arc-length radial coordinate r with kappa_cos(-z, rho) kappa_cos(z, r) = 1.

    Equals the integral of 1/cosh(l1 x) from 0 to rho on the z > 0 branch.
    """
    if rho < 0:
        raise OutOfChartError("rho must be nonnegative")
    if abs(z) < FLAT_Z_CUTOFF:
        return float(rho)
    s = np.sqrt(abs(z))
    if z > 0:
        return float(np.arccos(1.0 / np.cosh(s * rho)) / s)
    if s * rho >= np.pi / 2:
        raise OutOfChartError("rho outside the principal branch for z < 0")
    return float(np.arccosh(1.0 / np.cos(s * rho)) / s)


def r_to_rho(r: float, z: float) -> float:
    """Inverse of :func:`rho_to_r` on the principal branch."""
    if r < 0:
        raise OutOfChartError("r must be nonnegative")
    if abs(z) < FLAT_Z_CUTOFF:
        return float(r)
    s = np.sqrt(abs(z))
    if z > 0:
        if s * r >= np.pi / 2:
            raise OutOfChartError("r outside the principal branch for z > 0")
        return float(np.arccosh(1.0 / np.cos(s * r)) / s)
    return float(np.arccos(1.0 / np.cosh(s * r)) / s)


# ---------------------------------------------------------------------------
# polar-chart Hamiltonians and their constants of motion
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PolarSystem:
    """A polar-chart Hamiltonian with its constants of motion by label."""

    hamiltonian: PhaseFunction
    constants: dict
    chart: str
    z: float
    kappa2: float


def _guard(value, what):
    if abs(dual.primal(value)) < 1e-12:
        raise EvaluationDomainError(f"chart-boundary singularity: {what} = 0")
    return value


def integrable_polar_system(z: float, kappa2: float) -> PolarSystem:
    """Geodesic flow of the variable-curvature family over (rho, theta, phi).

    H = (1/2) cosh(l1 rho) [p_rho^2 + (p_theta^2 + p_phi^2/ks(k2,theta)^2)
        / (kappa2 ks(-z,rho)^2)]
    with constants C(2) = p_phi^2 and
    C(3) = p_theta^2 + p_phi^2 / ks(kappa2, theta)^2.
    """
    z = float(z)
    kappa2 = float(kappa2)

    def ham(q, p):
        rho, theta = q[0], q[1]
        ks_r = _guard(kappa_sin(-z, rho), "sinh(l1 rho)/l1")
        ks_t = _guard(kappa_sin(kappa2, theta), "sin(l2 theta)/l2")
        kc_r = kappa_cos(-z, rho)
        angular = p[1] * p[1] + p[2] * p[2] / (ks_t * ks_t)
        return 0.5 * kc_r * (p[0] * p[0] + angular / (kappa2 * ks_r * ks_r))

    def c_two(q, p):
        return p[2] * p[2]

    def c_three(q, p):
        ks_t = _guard(kappa_sin(kappa2, q[1]), "sin(l2 theta)/l2")
        return p[1] * p[1] + p[2] * p[2] / (ks_t * ks_t)

    return PolarSystem(
        hamiltonian=PhaseFunction(3, ham, "H_polar_int"),
        constants={
            "C(2)": PhaseFunction(3, c_two, "C(2)p"),
            "C(3)": PhaseFunction(3, c_three, "C(3)p"),
        },
        chart="rho",
        z=z,
        kappa2=kappa2,
    )


def superintegrable_polar_system(z: float, kappa2: float) -> PolarSystem:
    """Constant-curvature geodesic flow over (r, theta, phi) with 4 constants.

    H = (1/2) [p_r^2 + (p_theta^2 + p_phi^2/ks(k2,theta)^2)/(kappa2 ks(z,r)^2)];
    constants C(2), C(3) as in the integrable system plus the two extra
    quadratic integrals I(2), I(3).
    """
    z = float(z)
    kappa2 = float(kappa2)

    def ham(q, p):
        r, theta = q[0], q[1]
        ks_r = _guard(kappa_sin(z, r), "sin(l1 r)/l1")
        ks_t = _guard(kappa_sin(kappa2, theta), "sin(l2 theta)/l2")
        angular = p[1] * p[1] + p[2] * p[2] / (ks_t * ks_t)
        return 0.5 * (p[0] * p[0] + angular / (kappa2 * ks_r * ks_r))

    def c_two(q, p):
        return p[2] * p[2]

    def c_three(q, p):
        ks_t = _guard(kappa_sin(kappa2, q[1]), "sin(l2 theta)/l2")
        return p[1] * p[1] + p[2] * p[2] / (ks_t * ks_t)

    def i_two(q, p):
        r, theta, phi = q
        ks_r = _guard(kappa_sin(z, r), "sin(l1 r)/l1")
        ks_t = _guard(kappa_sin(kappa2, theta), "sin(l2 theta)/l2")
        kc_r = kappa_cos(z, r)
        kc_t = kappa_cos(kappa2, theta)
        sphi = dual.sin(phi)
        cot_r = kc_r / ks_r
        lin = (
            kappa2 * ks_t * sphi * p[0]
            + kc_t * sphi * cot_r * p[1]
            + dual.cos(phi) * cot_r / ks_t * p[2]
        )
        return lin * lin

    def i_three(q, p):
        r, theta = q[0], q[1]
        ks_r = _guard(kappa_sin(z, r), "sin(l1 r)/l1")
        ks_t = _guard(kappa_sin(kappa2, theta), "sin(l2 theta)/l2")
        kc_r = kappa_cos(z, r)
        kc_t = kappa_cos(kappa2, theta)
        cot_r = kc_r / ks_r
        lin = kappa2 * ks_t * p[0] + kc_t * cot_r * p[1]
        coeff = z * kappa2 + (cot_r / ks_t) * (cot_r / ks_t)
        return lin * lin + coeff * p[2] * p[2]

    return PolarSystem(
        hamiltonian=PhaseFunction(3, ham, "H_polar_sup"),
        constants={
            "C(2)": PhaseFunction(3, c_two, "C(2)p"),
            "C(3)": PhaseFunction(3, c_three, "C(3)p"),
            "I(2)": PhaseFunction(3, i_two, "I(2)p"),
            "I(3)": PhaseFunction(3, i_three, "I(3)p"),
        },
        chart="r",
        z=z,
        kappa2=kappa2,
    )


def superintegrable_matched_state(
    point: PhasePoint, z: float, kappa2: float, normalization: str = "canonical"
) -> PhasePoint:
    """Map a Cartesian phase point to the (r, theta, phi) chart.

    Composition of :func:`transform_to_polar` with the radial
    reparametrization; p_r = p_rho * cosh(l1 rho) since dr/drho =
    1/cosh(l1 rho).
    """
    polar = transform_to_polar(point, z, kappa2, normalization)
    r = rho_to_r(polar.rho, z)
    p_r = polar.p_rho * kappa_cos(-z, polar.rho)
    return PhasePoint(
        [r, polar.theta, polar.phi], [p_r, polar.p_theta, polar.p_phi]
    )
