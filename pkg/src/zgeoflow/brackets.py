"""Exact differentiation, the canonical Poisson bracket and verification tools.

The primary differentiation path is forward-mode dual numbers (machine
precision, nestable); a central finite-difference path exists purely as an
independent cross-check oracle and is never used by the bracket itself.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import dual
from .algebra import realize_generators, sinhc
from .phase import EvaluationDomainError, PhaseFunction, PhasePoint

#: default relative tolerance on singular values for the numerical rank
RANK_TOLERANCE = 1e-8


@dataclass(frozen=True)
class PhaseGradient:
    """Partial derivatives of a phase function at a point."""

    dq: np.ndarray
    dp: np.ndarray

    def flat(self) -> np.ndarray:
        return np.concatenate([self.dq, self.dp])


def gradient(f: PhaseFunction, x: PhasePoint) -> PhaseGradient:
    """Machine-precision gradient of ``f`` at ``x`` via dual numbers."""
    n = x.dim
    if f.arity != n:
        raise ValueError("arity mismatch between function and point")
    q = list(x.q)
    p = list(x.p)
    cplx = np.iscomplexobj(x.q) or np.iscomplexobj(x.p)
    dq = np.zeros(n, dtype=complex if cplx else float)
    dp = np.zeros_like(dq)
    for i in range(n):
        tag = dual.fresh_tag()
        qs = list(q)
        qs[i] = dual.Dual(tag, q[i], 1.0)
        dq[i] = dual.dual_part(f.raw(qs, p), tag)
        tag = dual.fresh_tag()
        ps = list(p)
        ps[i] = dual.Dual(tag, p[i], 1.0)
        dp[i] = dual.dual_part(f.raw(q, ps), tag)
    if not (np.all(np.isfinite(dq)) and np.all(np.isfinite(dp))):
        raise EvaluationDomainError(f"gradient of {f.label} not finite at {x}")
    return PhaseGradient(dq, dp)


def gradient_lists(f: PhaseFunction, q: list, p: list):
    """Gradient on raw coordinate lists; hot-loop variant of :func:`gradient`."""
    n = len(q)
    dq = [0.0] * n
    dp = [0.0] * n
    for i in range(n):
        tag = dual.fresh_tag()
        qs = list(q)
        qs[i] = dual.Dual(tag, q[i], 1.0)
        dq[i] = dual.dual_part(f.fn(qs, p), tag)
        tag = dual.fresh_tag()
        ps = list(p)
        ps[i] = dual.Dual(tag, p[i], 1.0)
        dp[i] = dual.dual_part(f.fn(q, ps), tag)
    return dq, dp


def gradient_fd(f: PhaseFunction, x: PhasePoint) -> PhaseGradient:
    """Central finite-difference gradient; independent test oracle only."""
    n = x.dim
    base = x.flat()
    cbrt_eps = float(np.finfo(float).eps) ** (1.0 / 3.0)
    out = np.zeros(2 * n, dtype=base.dtype)
    for i in range(2 * n):
        h = cbrt_eps * max(1.0, abs(base[i]))
        up = base.copy()
        dn = base.copy()
        up[i] += h
        dn[i] -= h
        fu = f(PhasePoint.from_flat(up))
        fd = f(PhasePoint.from_flat(dn))
        out[i] = (fu - fd) / (2.0 * h)
    return PhaseGradient(out[:n], out[n:])


def poisson_bracket(f: PhaseFunction, g: PhaseFunction, x: PhasePoint):
    """Canonical bracket {f, g} = sum_i df/dq_i dg/dp_i - df/dp_i dg/dq_i."""
    if f.arity != g.arity:
        raise ValueError("arity mismatch between bracket arguments")
    gf = gradient(f, x)
    gg = gradient(g, x)
    val = np.dot(gf.dq, gg.dp) - np.dot(gf.dp, gg.dq)
    return val if np.iscomplexobj(val) else float(val)


def bracket_residual(f: PhaseFunction, g: PhaseFunction, x: PhasePoint, target=0.0):
    """|{f, g} - target| scaled by the intrinsic magnitude of the bracket.

    The scale is max(1, |target|, sum_i |df/dq_i dg/dp_i| + |df/dp_i dg/dq_i|),
    the level at which float64 roundoff necessarily lives; identities that hold
    algebraically give residuals near machine epsilon in this measure
    regardless of how large the generator values grow on the sampling domain.
    """
    gf = gradient(f, x)
    gg = gradient(g, x)
    val = np.dot(gf.dq, gg.dp) - np.dot(gf.dp, gg.dq)
    scale = float(
        np.sum(np.abs(gf.dq * gg.dp)) + np.sum(np.abs(gf.dp * gg.dq))
    )
    return abs(val - target) / max(1.0, abs(target), scale)


def bracket_function(f: PhaseFunction, g: PhaseFunction) -> PhaseFunction:
    """{f, g} as a PhaseFunction, differentiable again (nested duals)."""
    if f.arity != g.arity:
        raise ValueError("arity mismatch between bracket arguments")
    n = f.arity

    def fn(q, p):
        out = 0.0
        for i in range(n):
            tq = dual.fresh_tag()
            qs = list(q)
            qs[i] = dual.Dual(tq, q[i], 1.0)
            df_dqi = dual.dual_part(f.raw(qs, p), tq)
            tq = dual.fresh_tag()
            qs = list(q)
            qs[i] = dual.Dual(tq, q[i], 1.0)
            dg_dqi = dual.dual_part(g.raw(qs, p), tq)
            tp = dual.fresh_tag()
            ps = list(p)
            ps[i] = dual.Dual(tp, p[i], 1.0)
            df_dpi = dual.dual_part(f.raw(q, ps), tp)
            tp = dual.fresh_tag()
            ps = list(p)
            ps[i] = dual.Dual(tp, p[i], 1.0)
            dg_dpi = dual.dual_part(g.raw(q, ps), tp)
            out = out + df_dqi * dg_dpi - df_dpi * dg_dqi
        return out

    return PhaseFunction(n, fn, f"{{{f.label},{g.label}}}")


def sample_points(n: int, samples: int, seed: int, scale: float = 2.0):
    """Seed-reproducible sample of phase points with |q_i|, |p_i| <= scale.

    Each point is drawn from a generator seeded by (seed, index), so the
    sample is independent of evaluation order.
    """
    pts = []
    for k in range(samples):
        rng = np.random.default_rng([seed, k])
        vec = rng.uniform(-scale, scale, size=2 * n)
        pts.append(PhasePoint(vec[:n], vec[n:]))
    return pts


@dataclass(frozen=True)
class AlgebraReport:
    """Max residuals of the three defining bracket relations over a sample."""

    n_sites: int
    z: float
    samples: int
    seed: int
    residual_j3_jplus: float
    residual_j3_jminus: float
    residual_jminus_jplus: float
    threshold: float = 1e-9

    @property
    def max_residual(self) -> float:
        return max(
            self.residual_j3_jplus,
            self.residual_j3_jminus,
            self.residual_jminus_jplus,
        )

    @property
    def passed(self) -> bool:
        return self.max_residual < self.threshold

    def to_text(self) -> str:
        lines = [
            f"n_sites = {self.n_sites}",
            f"z = {self.z:.17g}",
            f"samples = {self.samples}",
            f"seed = {self.seed}",
            f"residual_j3_jplus = {self.residual_j3_jplus:.17g}",
            f"residual_j3_jminus = {self.residual_j3_jminus:.17g}",
            f"residual_jminus_jplus = {self.residual_jminus_jplus:.17g}",
            f"threshold = {self.threshold:.17g}",
            f"passed = {self.passed}",
        ]
        return "\n".join(lines)


def check_algebra(n: int, z: float, samples: int = 200, seed: int = 0) -> AlgebraReport:
    """Verify the three defining brackets of the realization at random points.

    Scaled residuals (see :func:`bracket_residual`) of:
        {J3, J+} - 2 J+ cosh(z J-)
        {J3, J-} + 2 J- sinhc(z J-)        (equals -2 sinh(zJ-)/z, z = 0 safe)
        {J-, J+} - 4 J3
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    gen = realize_generators(n, z)
    jm, jp, j3 = gen.as_tuple()
    r1 = r2 = r3 = 0.0
    for x in sample_points(n, samples, seed):
        jm_v = float(jm(x))
        jp_v = float(jp(x))
        j3_v = float(j3(x))
        r1 = max(r1, bracket_residual(j3, jp, x, 2.0 * jp_v * np.cosh(z * jm_v)))
        r2 = max(r2, bracket_residual(j3, jm, x, -2.0 * jm_v * sinhc(z * jm_v)))
        r3 = max(r3, bracket_residual(jm, jp, x, 4.0 * j3_v))
    return AlgebraReport(n, float(z), samples, seed, float(r1), float(r2), float(r3))


@dataclass(frozen=True)
class InvolutionReport:
    """Pairwise max |{f_i, f_j}| over a sample of phase points."""

    labels: tuple
    residuals: np.ndarray
    samples: int
    seed: int
    threshold: float = 1e-9

    @property
    def max_residual(self) -> float:
        return float(np.max(self.residuals))

    @property
    def passed(self) -> bool:
        return self.max_residual < self.threshold

    def to_text(self) -> str:
        lines = [
            f"functions = {', '.join(self.labels)}",
            f"samples = {self.samples}",
            f"seed = {self.seed}",
            f"threshold = {self.threshold:.17g}",
            f"passed = {self.passed}",
            "residual_matrix:",
        ]
        for row in self.residuals:
            lines.append("  " + " ".join(f"{v:.10e}" for v in row))
        return "\n".join(lines)


def check_involution(
    funcs, samples: int = 50, seed: int = 0, threshold: float = 1e-9
) -> InvolutionReport:
    """Pairwise scaled bracket residual matrix for a list of phase functions."""
    funcs = list(funcs)
    arities = {f.arity for f in funcs}
    if len(arities) != 1:
        raise ValueError("all functions must share the same arity")
    n = arities.pop()
    k = len(funcs)
    res = np.zeros((k, k))
    for x in sample_points(n, samples, seed):
        for i in range(k):
            for j in range(i + 1, k):
                b = bracket_residual(funcs[i], funcs[j], x)
                if b > res[i, j]:
                    res[i, j] = b
                    res[j, i] = b
    return InvolutionReport(
        tuple(f.label for f in funcs), res, samples, seed, threshold
    )


def independence_rank(funcs, x: PhasePoint, tolerance: float = RANK_TOLERANCE) -> int:
    """Numerical rank of the stacked gradients of ``funcs`` at ``x``.

    Singular values above ``tolerance`` times the largest one count.
    """
    rows = [gradient(f, x).flat() for f in funcs]
    mat = np.asarray(rows)
    svals = np.linalg.svd(mat, compute_uv=False)
    if svals.size == 0 or svals[0] == 0.0:
        return 0
    return int(np.sum(svals > tolerance * svals[0]))
