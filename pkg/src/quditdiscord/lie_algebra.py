"""su(d) generator algebra for qudits.

Generalized Gell-Mann generators, the symmetric/antisymmetric structure
tensors, the star and wedge products they induce on R^(d^2-1), the Jordan
product in coefficient form, and the adjoint representation of SU(d).

Everything here is dense numpy at desk scale (d <= 5 or so).  All returned
arrays are frozen (non-writeable) so basis/tensor objects can be shared
freely across threads.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "UnsupportedDimensionError",
    "GellMannBasis",
    "StructureTensors",
    "StarSumResult",
    "build_basis",
    "structure_tensors",
    "star",
    "wedge",
    "expand",
    "decompose",
    "decompose_complex",
    "jordan_product",
    "adjoint_rep",
    "phase_normalize",
    "star_sum_criterion",
    "random_special_unitary",
    "random_orthogonal",
    "expi",
]


class UnsupportedDimensionError(ValueError):
    """Raised for qudit dimensions outside d >= 3."""


def _freeze(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class GellMannBasis:
    """Ordered Hermitian generators of su(d).

    ``generators[j-1]`` is the 1-based generator with tr(g_j g_k) = 2 delta_jk.
    The diagonal generators sit exactly at the 1-based indices k^2 - 1 for
    k = 2..d; all other generators have zero diagonal.  For d = 3 this is the
    standard Gell-Mann ordering.
    """

    d: int
    generators: np.ndarray  # shape (d**2 - 1, d, d), complex

    @property
    def n(self) -> int:
        """Number of generators, d^2 - 1."""
        return self.d * self.d - 1

    @property
    def dprime(self) -> float:
        """sqrt(d(d-1)/2) / (d-2); singular at d = 2, hence d >= 3 only."""
        return math.sqrt(self.d * (self.d - 1) / 2.0) / (self.d - 2)

    @property
    def dprimeprime(self) -> float:
        """sqrt(d(d-1)/2), the coherence-vector scale factor."""
        return math.sqrt(self.d * (self.d - 1) / 2.0)

    @property
    def diagonal_indices(self) -> tuple[int, ...]:
        """1-based positions of the diagonal generators (k^2 - 1, k = 2..d)."""
        return tuple(k * k - 1 for k in range(2, self.d + 1))


@dataclass(frozen=True)
class StructureTensors:
    """Dense structure tensors of su(d).

    ``dhat[j, k, l]`` is totally symmetric, ``fhat[j, k, l]`` totally
    antisymmetric.  ``Delta`` / ``F`` expose the same data as stacks of
    matrices (Delta[j])_{kl} = dhat_{jkl}, (F[j])_{kl} = fhat_{jkl}.
    """

    d: int
    dhat: np.ndarray
    fhat: np.ndarray

    @property
    def n(self) -> int:
        return self.d * self.d - 1

    @property
    def dprime(self) -> float:
        return math.sqrt(self.d * (self.d - 1) / 2.0) / (self.d - 2)

    @property
    def Delta(self) -> np.ndarray:
        return self.dhat

    @property
    def F(self) -> np.ndarray:
        return self.fhat


@dataclass(frozen=True)
class StarSumResult:
    """Outcome of the star-sum criterion sum_k (A e_k) * (B e_k) = 0."""

    residual: np.ndarray
    satisfied: bool
    max_delta_trace: float


@functools.lru_cache(maxsize=None)
def build_basis(d: int) -> GellMannBasis:
    """Construct the generalized Gell-Mann basis of su(d).

    Off-diagonal pairs (p, q), p < q, are enumerated lexicographically and
    contribute the symmetric generator e_pq + e_qp followed by the
    antisymmetric -i(e_pq - e_qp); the diagonal generator for level k is
    sqrt(2/(k(k-1))) diag(1, ..., 1, -(k-1), 0, ..., 0) placed at index
    k^2 - 1.  Yields the standard Gell-Mann matrices for d = 3.
    """
    if not isinstance(d, (int, np.integer)) or d < 3:
        raise UnsupportedDimensionError(
            f"qudit dimension must be an integer >= 3, got {d!r}"
        )
    d = int(d)
    off_diagonal = []
    for p in range(d - 1):
        for q in range(p + 1, d):
            sym = np.zeros((d, d), dtype=complex)
            sym[p, q] = sym[q, p] = 1.0
            asym = np.zeros((d, d), dtype=complex)
            asym[p, q] = -1.0j
            asym[q, p] = 1.0j
            off_diagonal.append(sym)
            off_diagonal.append(asym)

    diag_at = {k * k - 1 for k in range(2, d + 1)}
    generators = np.zeros((d * d - 1, d, d), dtype=complex)
    it = iter(off_diagonal)
    for idx in range(1, d * d):  # 1-based generator index
        if idx in diag_at:
            k = int(round(math.sqrt(idx + 1)))
            vec = np.zeros(d)
            vec[: k - 1] = 1.0
            vec[k - 1] = -(k - 1)
            generators[idx - 1] = np.diag(vec) * math.sqrt(2.0 / (k * (k - 1)))
        else:
            generators[idx - 1] = next(it)
    return GellMannBasis(d=d, generators=_freeze(generators))


@functools.lru_cache(maxsize=None)
def _tensors_for_dimension(d: int) -> StructureTensors:
    basis = build_basis(d)
    g = basis.generators
    # tr(g_j g_k g_l); dhat/fhat are its real/imaginary halves.
    triple = np.einsum("jab,kbc,lca->jkl", g, g, g, optimize=True)
    dhat = triple.real / 2.0
    fhat = triple.imag / 2.0
    dhat[np.abs(dhat) < 1e-14] = 0.0
    fhat[np.abs(fhat) < 1e-14] = 0.0
    return StructureTensors(d=d, dhat=_freeze(dhat), fhat=_freeze(fhat))


def structure_tensors(basis: GellMannBasis) -> StructureTensors:
    """Structure tensors dhat_jkl = tr([g_j,g_k]_+ g_l)/4, fhat_jkl = tr([g_j,g_k] g_l)/4i."""
    return _tensors_for_dimension(basis.d)


def _check_vector(tensors: StructureTensors, v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.shape != (tensors.n,):
        raise ValueError(f"coefficient vector must have length {tensors.n}, got {v.shape}")
    return v


def star(tensors: StructureTensors, n: np.ndarray, m: np.ndarray) -> np.ndarray:
    """Symmetric star product (n * m)_j = d' sum_kl dhat_jkl n_k m_l."""
    n = _check_vector(tensors, n)
    m = _check_vector(tensors, m)
    return tensors.dprime * np.einsum("jkl,k,l->j", tensors.dhat, n, m, optimize=True)


def wedge(tensors: StructureTensors, n: np.ndarray, m: np.ndarray) -> np.ndarray:
    """Antisymmetric wedge product (n ^ m)_j = d' sum_kl fhat_jkl n_k m_l."""
    n = _check_vector(tensors, n)
    m = _check_vector(tensors, m)
    return tensors.dprime * np.einsum("jkl,k,l->j", tensors.fhat, n, m, optimize=True)


def expand(basis: GellMannBasis, a0: complex, a: np.ndarray) -> np.ndarray:
    """Assemble a0*I + <a, g> from coefficient form."""
    a = np.asarray(a)
    if a.shape != (basis.n,):
        raise ValueError(f"coefficient vector must have length {basis.n}, got {a.shape}")
    return a0 * np.eye(basis.d, dtype=complex) + np.einsum(
        "j,jab->ab", a, basis.generators
    )


def decompose(
    basis: GellMannBasis, A: np.ndarray, *, atol: float = 1e-9
) -> tuple[float, np.ndarray]:
    """Coefficients (a0, a) with A = a0*I + <a, g>; A must be Hermitian.

    a0 = tr(A)/d and a_j = tr(A g_j)/2.  Raises on a Hermiticity defect
    above ``atol`` since a real coefficient vector is requested.
    """
    A = np.asarray(A, dtype=complex)
    if A.shape != (basis.d, basis.d):
        raise ValueError(f"matrix must be {basis.d}x{basis.d}, got {A.shape}")
    herm_defect = float(np.max(np.abs(A - A.conj().T)))
    if herm_defect > atol:
        raise ValueError(f"matrix is not Hermitian (defect {herm_defect:.3e})")
    a0, a = decompose_complex(basis, A)
    return float(a0.real), a.real.copy()


def decompose_complex(basis: GellMannBasis, A: np.ndarray) -> tuple[complex, np.ndarray]:
    """Like :func:`decompose` but for arbitrary matrices (complex coefficients)."""
    A = np.asarray(A, dtype=complex)
    a0 = np.trace(A) / basis.d
    a = 0.5 * np.einsum("ab,jba->j", A, basis.generators, optimize=True)
    return a0, a


def jordan_product(
    basis: GellMannBasis,
    a: tuple[float, np.ndarray],
    b: tuple[float, np.ndarray],
) -> tuple[float, np.ndarray]:
    """Jordan product (AB + BA)/2 in coefficient form.

    For A = a0*I + <a, g>, B = b0*I + <b, g>:
    c0 = a0 b0 + (2/d) <a, b> and c = a0 b + b0 a + (a * b)/d'.
    """
    a0, av = a
    b0, bv = b
    t = structure_tensors(basis)
    av = _check_vector(t, av)
    bv = _check_vector(t, bv)
    c0 = a0 * b0 + (2.0 / basis.d) * float(av @ bv)
    c = a0 * bv + b0 * av + star(t, av, bv) / basis.dprime
    return c0, c


def adjoint_rep(
    basis: GellMannBasis,
    U: np.ndarray,
    *,
    atol: float = 1e-9,
    require_special: bool = True,
) -> np.ndarray:
    """Adjoint rotation R(U) with R(U)_jk = tr(U g_k U^+ g_j)/2.

    R(U) is real orthogonal and satisfies U g_j U^+ = sum_k R(U)_kj g_k.
    ``require_special`` enforces det U = 1; conjugation is insensitive to a
    global phase, so callers holding a plain unitary can run it through
    :func:`phase_normalize` first.
    """
    U = np.asarray(U, dtype=complex)
    d = basis.d
    if U.shape != (d, d):
        raise ValueError(f"unitary must be {d}x{d}, got {U.shape}")
    defect = float(np.max(np.abs(U.conj().T @ U - np.eye(d))))
    if defect > atol:
        raise ValueError(f"matrix is not unitary (defect {defect:.3e})")
    if require_special:
        det_defect = abs(np.linalg.det(U) - 1.0)
        if det_defect > atol:
            raise ValueError(f"matrix is not special unitary (|det-1| = {det_defect:.3e})")
    g = basis.generators
    rotated = np.einsum("ab,kbc,dc->kad", U, g, U.conj(), optimize=True)
    R = 0.5 * np.einsum("kad,jda->jk", rotated, g, optimize=True)
    return R.real


def phase_normalize(U: np.ndarray) -> np.ndarray:
    """Rescale a unitary by a global phase so that det U = 1."""
    U = np.asarray(U, dtype=complex)
    det = np.linalg.det(U)
    return U / det ** (1.0 / U.shape[0])


def star_sum_criterion(
    tensors: StructureTensors,
    A: np.ndarray,
    B: np.ndarray,
    *,
    tol: float = 1e-10,
) -> StarSumResult:
    """Evaluate sum_k (A e_k) * (B e_k) over the canonical basis.

    The residual vector equals d' * (tr(A^T Delta_j B))_j, so it vanishes
    exactly when all the Delta traces do; both quantities are reported.
    """
    n = tensors.n
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if A.shape != (n, n) or B.shape != (n, n):
        raise ValueError(f"A and B must be {n}x{n}")
    traces = np.einsum("km,jkl,lm->j", A, tensors.dhat, B, optimize=True)
    residual = tensors.dprime * traces
    return StarSumResult(
        residual=residual,
        satisfied=bool(np.max(np.abs(residual)) < tol),
        max_delta_trace=float(np.max(np.abs(traces))),
    )


def expi(H: np.ndarray) -> np.ndarray:
    """exp(iH) for Hermitian H via eigendecomposition."""
    w, v = np.linalg.eigh(H)
    return (v * np.exp(1j * w)) @ v.conj().T


def random_special_unitary(d: int, seed) -> np.ndarray:
    """Seeded U = exp(i <theta, g>) with theta a standard spherical Gaussian."""
    basis = build_basis(d)
    rng = np.random.default_rng(seed)
    theta = rng.standard_normal(basis.n)
    return expi(expand(basis, 0.0, theta))


def random_orthogonal(size: int, seed) -> np.ndarray:
    """Seeded random orthogonal matrix (QR of a Gaussian, signs fixed)."""
    rng = np.random.default_rng(seed)
    q, r = np.linalg.qr(rng.standard_normal((size, size)))
    return q * np.sign(np.diag(r))
