"""
先验模型下的校正滤波器 - 子空间先验、平滑先验与带限基线

Both priors reduce to the graph Wiener filter with a prior-induced signal
covariance: Σₓ = A Σ_d Aᵀ for the subspace prior and
Σₓ = (ρ²/N) (VᵀV)⁻¹ for the smoothness prior.
"""
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence, Tuple, Union

import numpy as np
from scipy import linalg

from .errors import (
    DimensionMismatchError,
    KernelNotPositiveError,
    KExceedsNError,
    SingularCrossGramError,
    UsageError,
)
from .kernels import DEFAULT_SMOOTHNESS_EPS, bandlimited_kernel, smoothness_kernel
from .sampling import (
    ReconstructionOperator,
    SamplingDomain,
    SamplingOperator,
    check_divisible,
    spectral_reconstructor,
    spectral_sampler,
)
from .spectral import SpectralBasis, SpectralKernel
from .stationarity import CovarianceMatrix
from .wiener import (
    DEFAULT_MAX_CONDITION,
    CorrectionFilter,
    FilterMethod,
    RecoveryPipeline,
    correction_predefined,
    correction_unconstrained,
    solve_gram,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SubspacePrior:
    """x = A d, d ~ (0, Σ_d)."""

    a: np.ndarray
    sigma_d: np.ndarray

    def __post_init__(self):
        a = np.array(self.a, dtype=float, copy=True)
        if a.ndim != 2 or a.shape[1] > a.shape[0]:
            raise DimensionMismatchError(f"generator must be N×K with K <= N, got {a.shape}")
        if np.linalg.matrix_rank(a) < a.shape[1]:
            raise UsageError("subspace generator does not have full column rank")
        sd = np.array(self.sigma_d, dtype=float, copy=True)
        if sd.shape != (a.shape[1], a.shape[1]):
            raise DimensionMismatchError(f"Σ_d must be {a.shape[1]}×{a.shape[1]}, got {sd.shape}")
        try:
            linalg.cholesky(0.5 * (sd + sd.T))
        except linalg.LinAlgError:
            raise UsageError("Σ_d is not symmetric positive definite")
        a.setflags(write=False)
        sd.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "sigma_d", sd)

    @property
    def k(self) -> int:
        return int(self.a.shape[1])

    def covariance(self) -> CovarianceMatrix:
        g = self.a @ self.sigma_d @ self.a.T
        return CovarianceMatrix.from_array(0.5 * (g + g.T), check=False)


@dataclass(frozen=True)
class SmoothnessPrior:
    """‖V x‖² ≤ ρ², V = U V(Λ) Uᵀ."""

    v_kernel: SpectralKernel = field(default_factory=lambda: smoothness_kernel(DEFAULT_SMOOTHNESS_EPS))
    rho: float = 1.0

    def __post_init__(self):
        if not self.rho > 0:
            raise UsageError(f"smoothness budget rho must be > 0, got {self.rho}")


# ================= 子空间先验 =================

def first_k_eigenvectors_prior(basis: SpectralBasis, k: int, sigma_d=None) -> SubspacePrior:
    """A = first k Laplacian eigenvectors (a K-bandlimited model)."""
    if k > basis.n:
        raise KExceedsNError(f"k={k} exceeds N={basis.n}")
    if k < 1:
        raise UsageError(f"subspace dimension must be >= 1, got {k}")
    sd = np.eye(k) if sigma_d is None else sigma_d
    return SubspacePrior(a=basis.u[:, :k], sigma_d=sd)


def load_generator_csv(path: Union[str, Path]) -> np.ndarray:
    """N×K generator matrix from a headerless comma-separated file."""
    return np.loadtxt(path, delimiter=",", ndmin=2)


FIRST_K_EIGENVECTORS = "first-K-eigenvectors"


def subspace_prior_from_spec(basis: SpectralBasis, generator: str, k: int) -> SubspacePrior:
    """
    按配置构建子空间先验

    Args:
        generator: "first-K-eigenvectors" or a path to an N×K' generator CSV
        k: subspace dimension for "first-K-eigenvectors"

    Raises:
        DimensionMismatchError: the CSV generator does not have N rows
    """
    if generator == FIRST_K_EIGENVECTORS:
        return first_k_eigenvectors_prior(basis, k)
    a = load_generator_csv(generator)
    if a.shape[0] != basis.n:
        raise DimensionMismatchError(f"generator {generator} has {a.shape[0]} rows, graph has N={basis.n}")
    logger.debug(f"Loaded {a.shape[0]}x{a.shape[1]} subspace generator from {generator}")
    return SubspacePrior(a=a, sigma_d=np.eye(a.shape[1]))


def subspace_correction(
    prior: SubspacePrior,
    s: SamplingOperator,
    w: ReconstructionOperator,
    gamma_eta,
    max_condition: float = DEFAULT_MAX_CONDITION,
    regularization: float = 0.0,
) -> CorrectionFilter:
    """H = (WᵀW)⁻¹ Wᵀ A Σ_d Aᵀ S (S* A Σ_d Aᵀ S + Γ_η)⁻¹."""
    if prior.a.shape[0] != s.n:
        raise DimensionMismatchError(f"generator has {prior.a.shape[0]} rows, sampler has N={s.n}")
    correction = correction_predefined(s, w, prior.covariance(), gamma_eta, max_condition, regularization)
    return CorrectionFilter(h=correction.h, method=FilterMethod.SUB)


def subspace_correction_noiseless(
    prior: SubspacePrior,
    s: SamplingOperator,
    w: ReconstructionOperator,
    max_condition: float = DEFAULT_MAX_CONDITION,
) -> CorrectionFilter:
    """
    无噪声子空间校正 H = (WᵀW)⁻¹ Wᵀ A (S* A)⁻¹ (与 Σ_d 无关)

    Raises:
        SingularCrossGramError: S* A is not invertible
    """
    cross = s.s_star @ prior.a
    if cross.shape[0] != cross.shape[1]:
        raise DimensionMismatchError(f"S*A must be square, got {cross.shape}")
    cond = float(np.linalg.cond(cross))
    if not np.isfinite(cond) or cond > max_condition:
        raise SingularCrossGramError("S*A", cond)
    # Wᵀ A (S*A)⁻¹ = ((S*A)⁻ᵀ Aᵀ W)ᵀ
    rhs = linalg.solve(cross.T, prior.a.T @ w.w).T
    h = solve_gram(w.w.T @ w.w, rhs, "W*W", max_condition)
    return CorrectionFilter(h=h, method=FilterMethod.SUB)


# ================= 平滑先验 =================

def _smoothness_values(prior: SmoothnessPrior, basis: SpectralBasis) -> np.ndarray:
    v = prior.v_kernel.evaluate(basis)
    if np.any(v <= 0):
        bad = np.nonzero(v <= 0)[0]
        raise KernelNotPositiveError(f"smoothness kernel '{prior.v_kernel.name}' is not positive at {bad.tolist()}")
    return v


def smoothness_operator(prior: SmoothnessPrior, basis: SpectralBasis) -> np.ndarray:
    """V = U V(Λ) Uᵀ."""
    v = _smoothness_values(prior, basis)
    return (basis.u * v) @ basis.u.T


def smoothness_covariance(prior: SmoothnessPrior, basis: SpectralBasis) -> CovarianceMatrix:
    """
    Σₓ = (ρ²/N) U diag(1/V(λ)²) Uᵀ

    Satisfies tr(V Σₓ Vᵀ) = ρ² and ‖V Σₓ Vᵀ‖_F² = ρ⁴/N.
    """
    v = _smoothness_values(prior, basis)
    g = (prior.rho ** 2 / basis.n) * (basis.u / v ** 2) @ basis.u.T
    return CovarianceMatrix.from_array(0.5 * (g + g.T), check=False)


def smoothness_correction(
    prior: SmoothnessPrior,
    basis: SpectralBasis,
    s: SamplingOperator,
    w: ReconstructionOperator,
    max_condition: float = DEFAULT_MAX_CONDITION,
    regularization: float = 0.0,
) -> CorrectionFilter:
    """
    平滑先验 minimax 校正 H = (WᵀW)⁻¹ Wᵀ P S (S* P S)⁻¹, P = (VᵀV)⁻¹

    Built noiselessly; the ρ²/N factor cancels so P is used directly.
    """
    v = _smoothness_values(prior, basis)
    p = (basis.u / v ** 2) @ basis.u.T
    correction = correction_predefined(s, w, 0.5 * (p + p.T), None, max_condition, regularization)
    return CorrectionFilter(h=correction.h, method=FilterMethod.SMO)


def smoothness_unconstrained(
    prior: SmoothnessPrior,
    basis: SpectralBasis,
    s: SamplingOperator,
    max_condition: float = DEFAULT_MAX_CONDITION,
    regularization: float = 0.0,
) -> Tuple[CorrectionFilter, ReconstructionOperator]:
    """Unconstrained recovery with the smoothness covariance and Γ_η = 0."""
    correction, w = correction_unconstrained(
        s, smoothness_covariance(prior, basis), None, max_condition, regularization
    )
    return CorrectionFilter(h=correction.h, method=FilterMethod.SMO), w


# ================= 带限基线 =================

def bandlimited_baseline(basis: SpectralBasis, m_ratio: int, u_reduced=None) -> RecoveryPipeline:
    """图频域带限采样 + 带限重建, 无校正 (H = I)."""
    k = check_divisible(basis.n, m_ratio)
    kernel = bandlimited_kernel(k)
    return RecoveryPipeline(
        sampler=spectral_sampler(basis, kernel, m_ratio, u_reduced),
        correction=CorrectionFilter(h=np.eye(k), method=FilterMethod.BL),
        reconstructor=spectral_reconstructor(basis, kernel, m_ratio, u_reduced),
        name=FilterMethod.BL.value,
    )


def bandlimited_vertex_baseline(
    basis: SpectralBasis,
    vertex_set: Sequence[int],
    max_condition: float = DEFAULT_MAX_CONDITION,
) -> RecoveryPipeline:
    """
    顶点域带限基线: S* = I_M U_K U_Kᵀ, W = U_K (I_M U_K)⁻¹, H = I
    """
    idx = [int(v) for v in vertex_set]
    k = len(idx)
    if k > basis.n:
        raise KExceedsNError(f"vertex set of size {k} exceeds N={basis.n}")
    u_k = basis.u[:, :k]
    rows = u_k[idx, :]
    cond = float(np.linalg.cond(rows))
    if not np.isfinite(cond) or cond > max_condition:
        raise SingularCrossGramError("I_M U_K", cond, method=FilterMethod.BL.value)
    s_star = np.array(rows @ u_k.T)
    w = np.array(linalg.solve(rows.T, u_k.T).T)
    s_star.setflags(write=False)
    w.setflags(write=False)
    meta = {"vertex_set": tuple(idx), "kernel": "bandlimited"}
    return RecoveryPipeline(
        sampler=SamplingOperator(s_star=s_star, domain=SamplingDomain.VERTEX, meta=meta),
        correction=CorrectionFilter(h=np.eye(k), method=FilterMethod.BL),
        reconstructor=ReconstructionOperator(w=w, domain=SamplingDomain.VERTEX, meta=meta),
        name=FilterMethod.BL.value,
    )

