"""Discord values: exact formulas, universal lower bounds, and the minimizer.

The trace-norm discord is D1 = d/(2(d-1)) min_frames ||S||_1 and the
Hilbert-Schmidt one is D2 = d/(d-1) min_frames tr Q, with S the disturbance
and Q = S S^+.  For correlation matrices proportional to an orthogonal
matrix D2 is exact and frame independent; when the orthogonal matrix defines
a Jordan (anti-)automorphism the spectrum of Q is frame independent too and
D1 comes out in closed form.  Everything else gets the eigenvalue lower
bounds or the multi-start numerical minimizer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import minimize as _scipy_minimize

from .lie_algebra import GellMannBasis, build_basis, structure_tensors
from .measurement import (
    MeasurementFrame,
    disturbance_from_vectors,
    frame_from_theta,
    trace_norm_hermitian,
)
from .states import TwoQuditState

__all__ = [
    "DiscordEstimate",
    "JordanClass",
    "OptimizerConfig",
    "d2_frame_value",
    "smallest_eigenvalue_sum",
    "xi",
    "lower_bounds",
    "d1_exact_automorphism",
    "d1_exact_anti_automorphism",
    "d2_exact_orthogonal",
    "closed_form_spectra",
    "jordan_classify",
    "measurement_star_residual",
    "classify_correlation",
    "minimize_d1",
    "minimize_d2",
]


@dataclass(frozen=True)
class DiscordEstimate:
    """A discord value with its provenance and optimizer diagnostics."""

    value: float
    method: str  # analytic | lower_bound | numerical_min
    frame: Optional[MeasurementFrame] = None
    starts: int = 0
    best_residual: float = 0.0
    seed: int = 0


@dataclass(frozen=True)
class JordanClass:
    """Star/wedge covariance classification of an orthogonal matrix."""

    kind: str  # automorphism | anti_automorphism | neither
    orthogonality_defect: float
    star_defect: float
    wedge_defect: float
    wedge_sign: int


@dataclass(frozen=True)
class OptimizerConfig:
    starts: int = 32
    seed: int = 0
    tol: float = 1e-10
    max_iter: int = 2000


def d2_frame_value(basis: GellMannBasis, K: np.ndarray, frame: MeasurementFrame) -> float:
    """Hilbert-Schmidt objective at one frame: (4/(d^3(d-1))) tr(K K^T M)."""
    d = basis.d
    K = np.asarray(K, dtype=float)
    return 4.0 / (d ** 3 * (d - 1)) * float(np.trace(K @ K.T @ frame.M_real))


def smallest_eigenvalue_sum(A: np.ndarray, m0: int, *, atol: float = 1e-9) -> float:
    """min over rank-m0 orthogonal projectors P of tr(PA): the m0 smallest eigenvalues.

    A must be positive semidefinite and 0 < m0 < n0.
    """
    A = np.asarray(A, dtype=float)
    n0 = A.shape[0]
    if A.shape != (n0, n0):
        raise ValueError("A must be square")
    if not 0 < m0 < n0:
        raise ValueError(f"need 0 < m0 < n0, got m0={m0}, n0={n0}")
    eigs = np.linalg.eigvalsh((A + A.T) / 2.0)
    if eigs[0] < -atol:
        raise ValueError(f"A is not positive semidefinite (min eig {eigs[0]:.3e})")
    return float(np.sum(eigs[:m0]))


def xi(basis: GellMannBasis, K: np.ndarray) -> float:
    """Sum of the d(d-1) smallest eigenvalues of K K^T."""
    K = np.asarray(K, dtype=float)
    if K.shape != (basis.n, basis.n):
        raise ValueError(f"correlation matrix must be {basis.n}x{basis.n}")
    return smallest_eigenvalue_sum(K @ K.T, basis.d * (basis.d - 1))


def lower_bounds(basis: GellMannBasis, K: np.ndarray) -> tuple[float, float]:
    """Universal bounds (D2 >= 4 Xi/(d^3(d-1)), D1 >= sqrt(Xi)/(d(d-1)))."""
    d = basis.d
    value = xi(basis, K)
    return 4.0 * value / (d ** 3 * (d - 1)), math.sqrt(max(value, 0.0)) / (d * (d - 1))


def _check_range(t: float, lo: float, hi: float, what: str) -> None:
    if not (lo - 1e-12 <= t <= hi + 1e-12):
        raise ValueError(f"t={t} outside the physical range [{lo}, {hi}] for {what}")


def d1_exact_automorphism(d: int, t: float) -> float:
    """D1 = |t| for K = t R(U); physical for t in [-d/(2(d-1)), d/(2(d+1))]."""
    _check_range(t, -d / (2.0 * (d - 1)), d / (2.0 * (d + 1)), "the automorphism class")
    return abs(t)


def d1_exact_anti_automorphism(d: int, t: float) -> float:
    """D1 = (2/d)|t| for K = t T; physical for t in [-d/(2(d^2-1)), d/2]."""
    _check_range(t, -d / (2.0 * (d * d - 1)), d / 2.0, "the anti-automorphism class")
    return 2.0 * abs(t) / d


def d2_exact_orthogonal(d: int, t: float) -> float:
    """D2 = 4 t^2 / d^2 for K = t V0 with any orthogonal V0 (frame independent)."""
    if abs(t) > d / 2.0 + 1e-12:
        raise ValueError(f"|t|={abs(t)} exceeds the correlation ball radius d/2")
    return 4.0 * t * t / (d * d)


def closed_form_spectra(d: int, t: float) -> dict[str, list[tuple[float, int]]]:
    """Eigenvalue/multiplicity lists of the fixed operators behind the exact values.

    Keys: 'L' for sum_k g_{k^2-1} x g_{k^2-1}; 'KL' for the transposition-
    dressed (d-2) sum_j g_j x g_j^T plus L; 'q_auto' / 'q_anti' for Q at the
    canonical frame in the automorphism / anti-automorphism classes.  The
    leading q_anti eigenvalue is 4 t^2 (d-1)^2 / d^4, the value consistent
    with tr Q and with tr sqrt(Q) = 4(d-1)|t|/d^2.
    """
    spec_L = [(2.0 * (d - 1) / d, d), (-2.0 / d, d * (d - 1))]
    spec_KL = [
        (2.0 * (d * d * (d - 2) + 1) / d, 1),
        (-2.0 * (d - 1) / d, d * (d - 1)),
        (2.0 / d, d - 1),
    ]
    base = t * t / d ** 4
    spec_qa = [(4.0 * base, d * (d - 1)), (0.0, d)]
    spec_qaa = [
        (4.0 * base * (d - 1) ** 2, 1),
        (4.0 * base, d - 1),
        (0.0, d * (d - 1)),
    ]
    return {"L": spec_L, "KL": spec_KL, "q_auto": spec_qa, "q_anti": spec_qaa}


def jordan_classify(
    basis: GellMannBasis, V: np.ndarray, *, atol: float = 1e-9, tol: float = 1e-10
) -> JordanClass:
    """Classify an orthogonal V by its star/wedge covariance.

    automorphism: V(a*b) = Va*Vb and V(a^b) = Va^Vb on all pairs;
    anti_automorphism: star covariant, wedge anti-covariant; else neither.
    """
    n = basis.n
    V = np.asarray(V, dtype=float)
    if V.shape != (n, n):
        raise ValueError(f"V must be {n}x{n}")
    orth = float(np.max(np.abs(V.T @ V - np.eye(n))))
    if orth > atol:
        raise ValueError(f"V is not orthogonal (defect {orth:.3e})")
    t = structure_tensors(basis)
    if np.max(np.abs(V - np.diag(np.diag(V)))) == 0.0:
        s = np.diag(V)
        scale = s[:, None, None] * s[None, :, None] * s[None, None, :]
        d_t = t.dhat * scale
        f_t = t.fhat * scale
    else:
        d_t = np.einsum("jkl,ja,kb,lc->abc", t.dhat, V, V, V, optimize=True)
        f_t = np.einsum("jkl,ja,kb,lc->abc", t.fhat, V, V, V, optimize=True)
    star_defect = float(np.max(np.abs(d_t - t.dhat)))
    plus = float(np.max(np.abs(f_t - t.fhat)))
    minus = float(np.max(np.abs(f_t + t.fhat)))
    if star_defect < tol and plus < tol:
        return JordanClass("automorphism", orth, star_defect, plus, +1)
    if star_defect < tol and minus < tol:
        return JordanClass("anti_automorphism", orth, star_defect, minus, -1)
    wedge_sign = +1 if plus <= minus else -1
    return JordanClass("neither", orth, star_defect, min(plus, minus), wedge_sign)


def measurement_star_residual(
    basis: GellMannBasis, signs, frame: MeasurementFrame
) -> float:
    """max-norm of sum_k (I M I e_k) * e_k for a diagonal sign matrix I.

    Vanishes for every frame exactly when the sign matrix defines a Jordan
    automorphism.
    """
    t = structure_tensors(basis)
    s = np.asarray(signs, dtype=float).reshape(basis.n)
    imi = s[:, None] * frame.M_real * s[None, :]
    traces = np.einsum("kl,jkl->j", imi, t.dhat, optimize=True)
    return float(t.dprime * np.max(np.abs(traces)))


def classify_correlation(
    basis: GellMannBasis, K: np.ndarray, *, atol: float = 1e-8
) -> tuple[str, float]:
    """Detect the exactly-solvable structure of a correlation matrix.

    Returns (kind, t) with kind one of 'zero', 'automorphism',
    'anti_automorphism', 'orthogonal' (t V0 without Jordan structure) or
    'general'.  The Jordan kinds fix the sign of t; the bare orthogonal kind
    reports t = ||K||_F / sqrt(d^2-1) > 0.
    """
    K = np.asarray(K, dtype=float)
    n = basis.n
    scale = float(np.linalg.norm(K)) / math.sqrt(n)
    if scale < atol:
        return "zero", 0.0
    gram_defect = np.max(np.abs(K @ K.T / scale ** 2 - np.eye(n)))
    if gram_defect > atol:
        return "general", 0.0
    for t in (scale, -scale):
        jc = jordan_classify(basis, K / t, atol=1e-6, tol=1e-8)
        if jc.kind != "neither":
            return jc.kind, t
    return "orthogonal", scale


# --- numerical minimization over frames --------------------------------------


def _objective(basis: GellMannBasis, state: TwoQuditState, kind: str):
    d = basis.d
    x, K = state.x, state.K
    pref1 = d / (2.0 * (d - 1))
    pref2 = d / (d - 1.0)

    def f(theta: np.ndarray) -> float:
        frame = frame_from_theta(basis, theta)
        S = disturbance_from_vectors(basis, x, K, frame)
        if kind == "d1":
            return pref1 * trace_norm_hermitian(S)
        return pref2 * float(np.trace(S @ S.conj().T).real)

    return f


def _nelder_mead(f, theta0: np.ndarray, config: OptimizerConfig):
    """One start: Nelder-Mead with restarts from the incumbent on stall."""
    best_x = np.asarray(theta0, dtype=float)
    best_f = f(best_x)
    spread = np.inf
    for _ in range(4):
        res = _scipy_minimize(
            f,
            best_x,
            method="Nelder-Mead",
            options={
                "maxiter": config.max_iter,
                "fatol": config.tol,
                "xatol": 1e-9,
                "adaptive": len(best_x) >= 10,
            },
        )
        fvals = res.final_simplex[1]
        spread = float(fvals.max() - fvals.min())
        improved = res.fun < best_f - config.tol
        if res.fun < best_f:
            best_f, best_x = float(res.fun), np.asarray(res.x)
        if not improved:
            break
    return best_f, best_x, spread


def _minimize(basis: GellMannBasis, state: TwoQuditState, kind: str,
              config: OptimizerConfig) -> DiscordEstimate:
    f = _objective(basis, state, kind)
    n = basis.n
    best = None  # (value, norm, theta, spread)
    for s in range(config.starts):
        if s == 0:
            theta0 = np.zeros(n)
        else:
            rng = np.random.default_rng([config.seed, s])
            theta0 = 0.8 * rng.standard_normal(n)
        value, theta, spread = _nelder_mead(f, theta0, config)
        norm = float(np.linalg.norm(theta))
        candidate = (value, norm, theta, spread)
        if best is None or value < best[0] - 1e-12:
            best = candidate
        elif abs(value - best[0]) <= 1e-12 and norm < best[1]:
            best = candidate
    value, _, theta, spread = best
    frame = frame_from_theta(basis, theta)
    return DiscordEstimate(
        value=float(value),
        method="numerical_min",
        frame=frame,
        starts=config.starts,
        best_residual=spread,
        seed=config.seed,
    )


def minimize_d1(state: TwoQuditState, config: OptimizerConfig | None = None) -> DiscordEstimate:
    """Multi-start derivative-free minimization of the trace-norm objective.

    The returned value is an upper bound on the discord that equals it when
    the search converges globally; deterministic for a fixed seed.
    Non-convergence is reported through ``best_residual`` > tol, never by
    suppressing the value.
    """
    config = config or OptimizerConfig()
    return _minimize(build_basis(state.d), state, "d1", config)


def minimize_d2(state: TwoQuditState, config: OptimizerConfig | None = None) -> DiscordEstimate:
    """Multi-start minimization of the Hilbert-Schmidt objective."""
    config = config or OptimizerConfig()
    return _minimize(build_basis(state.d), state, "d2", config)
