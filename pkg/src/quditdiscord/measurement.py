"""Local von Neumann measurements and the disturbance machinery.

A measurement frame bundles the measured rank-1 projectors P_k = U P0_k U^+,
the adjoint rotation V = R(U), and the induced real projectors P (rank d-1)
and M = I - P (rank d(d-1)) acting on coefficient space.  The disturbance of
a state under the one-sided measurement is S = rho - (Phi x id)(rho), and
Q = S S^+ drives both discord measures.
"""

from __future__ import annotations

import numpy as np

from .lie_algebra import (
    GellMannBasis,
    adjoint_rep,
    decompose_complex,
    expand,
    expi,
    structure_tensors,
)
from .states import TwoQuditState, _kron_gg, _kron_gi, _kron_ig

__all__ = [
    "MeasurementFrame",
    "canonical_projector_diagonal",
    "canonical_frame",
    "frame_from_unitary",
    "frame_from_theta",
    "apply_measurement",
    "disturbance",
    "disturbance_from_vectors",
    "q_matrix",
    "q_expansion",
    "q_orthogonal",
    "q_automorphism",
    "q_anti_automorphism",
    "trace_norm_hermitian",
    "tau_map",
    "random_frame",
]


class MeasurementFrame:
    """Frame of a local projective measurement on subsystem A.

    Attributes: ``U`` (special unitary), ``projectors`` (stack of the d
    rank-1 projectors), ``V`` = R(U), ``P_real`` (real projector of rank
    d-1), ``M_real`` (its complement of rank d(d-1)).
    """

    __slots__ = ("d", "U", "projectors", "V", "P_real", "M_real")

    def __init__(self, d, U, projectors, V, P_real, M_real):
        self.d = d
        self.U = U
        self.projectors = projectors
        self.V = V
        self.P_real = P_real
        self.M_real = M_real


def canonical_projector_diagonal(basis: GellMannBasis) -> np.ndarray:
    """P0: ones exactly at the diagonal-generator slots k^2 - 1, k = 2..d."""
    diag = np.zeros(basis.n)
    for idx in basis.diagonal_indices:
        diag[idx - 1] = 1.0
    return np.diag(diag)


def frame_from_unitary(basis: GellMannBasis, U: np.ndarray) -> MeasurementFrame:
    """Frame with projectors U P0_k U^+ and real projector V P0 V^T."""
    d = basis.d
    U = np.asarray(U, dtype=complex)
    V = adjoint_rep(basis, U)  # validates unitarity / det
    projectors = np.einsum("ak,bk->kab", U, U.conj())
    P0 = canonical_projector_diagonal(basis)
    P_real = V @ P0 @ V.T
    M_real = np.eye(basis.n) - P_real
    return MeasurementFrame(
        d=d, U=U, projectors=projectors, V=V, P_real=P_real, M_real=M_real
    )


def canonical_frame(basis: GellMannBasis) -> MeasurementFrame:
    """Frame of the computational-basis measurement (U = I, exact P0)."""
    d = basis.d
    eye = np.eye(d, dtype=complex)
    projectors = np.einsum("ak,bk->kab", eye, eye.conj())
    P0 = canonical_projector_diagonal(basis)
    return MeasurementFrame(
        d=d,
        U=eye,
        projectors=projectors,
        V=np.eye(basis.n),
        P_real=P0,
        M_real=np.eye(basis.n) - P0,
    )


def frame_from_theta(basis: GellMannBasis, theta: np.ndarray) -> MeasurementFrame:
    """Frame of U = exp(i <theta, g>); the optimizer's parametrization."""
    return frame_from_unitary(basis, expi(expand(basis, 0.0, np.asarray(theta))))


def random_frame(basis: GellMannBasis, seed) -> MeasurementFrame:
    """Seeded random frame via a spherical-Gaussian theta."""
    rng = np.random.default_rng(seed)
    return frame_from_theta(basis, rng.standard_normal(basis.n))


def _rho_of(state) -> np.ndarray:
    return state.rho if isinstance(state, TwoQuditState) else np.asarray(state, dtype=complex)


def apply_measurement(state, frame: MeasurementFrame) -> np.ndarray:
    """(Phi x id)(rho) = sum_k (P_k x I) rho (P_k x I)."""
    d = frame.d
    rho = _rho_of(state)
    if rho.shape != (d * d, d * d):
        raise ValueError(f"state must be {d*d}x{d*d}, got {rho.shape}")
    r4 = rho.reshape(d, d, d, d)
    # sum_k P_k rho_A-block P_k applied to the left factor indices
    out = np.einsum("kap,pcqe,kqb->acbe", frame.projectors, r4, frame.projectors,
                    optimize=True)
    return out.reshape(d * d, d * d)


def disturbance(state, frame: MeasurementFrame) -> np.ndarray:
    """S = rho - (Phi x id)(rho); traceless Hermitian."""
    rho = _rho_of(state)
    return rho - apply_measurement(rho, frame)


def disturbance_from_vectors(
    basis: GellMannBasis, x: np.ndarray, K: np.ndarray, frame: MeasurementFrame
) -> np.ndarray:
    """Disturbance in coherence form.

    S = (1/d^2) [ d'' <Mx, g> x I + sum_k <MK e_k, g> x <e_k, g> ]; for
    locally maximally mixed states only the correlation term survives.
    """
    d = basis.d
    MK = frame.M_real @ np.asarray(K, dtype=float)
    S = np.einsum("jk,jkab->ab", MK, _kron_gg(d), optimize=True)
    x = np.asarray(x, dtype=float)
    if np.any(x):
        S = S + basis.dprimeprime * np.einsum(
            "j,jab->ab", frame.M_real @ x, _kron_gi(d)
        )
    return S / (d * d)


def q_matrix(S: np.ndarray) -> np.ndarray:
    """Q = S S^+ for Hermitian S, symmetrized against round-off."""
    S = np.asarray(S, dtype=complex)
    Q = S @ S.conj().T
    return (Q + Q.conj().T) / 2.0


def trace_norm_hermitian(S: np.ndarray) -> float:
    """Trace norm of a Hermitian matrix as the sum of |eigenvalues|.

    Equals tr sqrt(S S^+) but avoids the precision loss of squaring near
    zero eigenvalues.
    """
    return float(np.sum(np.abs(np.linalg.eigvalsh(S))))


def q_expansion(basis: GellMannBasis, K: np.ndarray, frame: MeasurementFrame) -> np.ndarray:
    """Five-term star/wedge expansion of Q for a locally maximally mixed state.

    With M = (projector complement) and columns m_j = M K e_j:

    Q = (1/d^4) [ (4/d^2) sum_j <m_j, m_j> I x I
                + (2/d) sum_l tr(M_K^T Delta_l M_K) g_l x I
                + (2/d) sum_p tr(M_K^T M_K Delta_p) I x g_p
                + sum_lp ( tr(M_K^T Delta_l M_K Delta_p)
                         + tr(M_K^T F_l M_K F_p) ) g_l x g_p ]
    """
    d, n = basis.d, basis.n
    K = np.asarray(K, dtype=float)
    if K.shape != (n, n):
        raise ValueError(f"correlation matrix must be {n}x{n}")
    t = structure_tensors(basis)
    MK = frame.M_real @ K
    gram = MK.T @ MK
    term1 = (4.0 / (d * d)) * np.trace(gram) * np.eye(d * d, dtype=complex)
    left = np.einsum("aj,lab,bj->l", MK, t.dhat, MK, optimize=True)
    term2 = (2.0 / d) * np.einsum("l,lab->ab", left, _kron_gi(d))
    right = np.einsum("ab,pab->p", gram, t.dhat, optimize=True)
    term3 = (2.0 / d) * np.einsum("p,pab->ab", right, _kron_ig(d))
    # the wedge part carries the opposite sign once the antisymmetric F is
    # contracted elementwise: sum_jk X_jk (F_p)_jk = -tr(X F_p)
    sym = np.einsum("aj,lab,bk,pjk->lp", MK, t.dhat, MK, t.dhat, optimize=True)
    asym = np.einsum("aj,lab,bk,pjk->lp", MK, t.fhat, MK, t.fhat, optimize=True)
    term45 = np.einsum("lp,lpab->ab", sym - asym, _kron_gg(d), optimize=True)
    return (term1 + term2 + term3 + term45) / (d ** 4)


def q_orthogonal(
    basis: GellMannBasis, t: float, V0: np.ndarray, frame: MeasurementFrame,
    *, atol: float = 1e-9,
) -> np.ndarray:
    """Closed form of Q for K = t V0 with V0 orthogonal.

    Q = (t^2/d^4) [ (4(d-1)/d) I x I + (2/d) I x sum_k X_k g_k
                  + sum_jk Y_jk g_j x g_k ]
    with X_k = tr(M V0 Delta_k V0^T) and
    Y_jk = tr(V0^T M Delta_j M V0 Delta_k + V0^T M F_j M V0 F_k).
    """
    d, n = basis.d, basis.n
    V0 = np.asarray(V0, dtype=float)
    if V0.shape != (n, n):
        raise ValueError(f"V0 must be {n}x{n}")
    if np.max(np.abs(V0.T @ V0 - np.eye(n))) > atol:
        raise ValueError("V0 is not orthogonal")
    ten = structure_tensors(basis)
    M = frame.M_real
    MV = M @ V0
    X = np.einsum("ab,kab->k", V0.T @ M @ V0, ten.dhat, optimize=True)
    # elementwise contraction with the antisymmetric F flips the trace sign
    Y = np.einsum("am,lab,bn,pmn->lp", MV, ten.dhat, MV, ten.dhat, optimize=True)
    Y -= np.einsum("am,lab,bn,pmn->lp", MV, ten.fhat, MV, ten.fhat, optimize=True)
    out = (4.0 * (d - 1) / d) * np.eye(d * d, dtype=complex)
    out += (2.0 / d) * np.einsum("k,kab->ab", X, _kron_ig(d))
    out += np.einsum("lp,lpab->ab", Y, _kron_gg(d), optimize=True)
    return (t * t / d ** 4) * out


def tau_map(basis: GellMannBasis, T: np.ndarray, A: np.ndarray) -> np.ndarray:
    """Coefficient-space map tau_T(a0 I + <a, g>) = a0 I + <T a, g>.

    Works for arbitrary (complex) coefficient vectors, so it can be applied
    to unitaries as well as Hermitian observables.
    """
    a0, a = decompose_complex(basis, A)
    return a0 * np.eye(basis.d, dtype=complex) + np.einsum(
        "j,jab->ab", np.asarray(T, dtype=float) @ a, basis.generators
    )


def _diagonal_generators(basis: GellMannBasis) -> np.ndarray:
    idx = [i - 1 for i in basis.diagonal_indices]
    return basis.generators[idx]


def q_automorphism(
    basis: GellMannBasis, t: float, V: np.ndarray, U: np.ndarray
) -> np.ndarray:
    """Closed form of Q for K = t V with V = R(U_V) an adjoint rotation.

    Q = (t^2/d^4) [ (4(d-1)/d) I x I
                  - 2 sum_k (U g_{k^2-1} U^+) x tau(U g_{k^2-1} U^+) ]
    where tau is the coefficient map of V^T: the rotation enters the
    B-side factor through its inverse.
    """
    d = basis.d
    U = np.asarray(U, dtype=complex)
    VT = np.asarray(V, dtype=float).T
    out = (4.0 * (d - 1) / d) * np.eye(d * d, dtype=complex)
    for g in _diagonal_generators(basis):
        rotated = U @ g @ U.conj().T
        out -= 2.0 * np.kron(rotated, tau_map(basis, VT, rotated))
    return (t * t / d ** 4) * out


def q_anti_automorphism(
    basis: GellMannBasis, t: float, T: np.ndarray, U: np.ndarray
) -> np.ndarray:
    """Closed form of Q for K = t T with T an anti-automorphism rotation.

    Q = (t^2/d^4) [ (4(d-1)/d) I x I
                  + 2 ( (d-2) sum_j g_j x tau(g_j)
                      + sum_k (U g_{k^2-1} U^+) x tau(U g_{k^2-1} U^+) ) ]
    with tau the coefficient map of T^T, as in :func:`q_automorphism`.
    """
    d = basis.d
    U = np.asarray(U, dtype=complex)
    TT = np.asarray(T, dtype=float).T
    out = (4.0 * (d - 1) / d) * np.eye(d * d, dtype=complex)
    ggt = np.einsum(
        "jab,kj,kcd->acbd", basis.generators, TT,
        basis.generators, optimize=True,
    ).reshape(d * d, d * d)
    out += 2.0 * (d - 2) * ggt
    for g in _diagonal_generators(basis):
        rotated = U @ g @ U.conj().T
        out += 2.0 * np.kron(rotated, tau_map(basis, TT, rotated))
    return (t * t / d ** 4) * out
