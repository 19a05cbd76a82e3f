"""
图 Wiener 校正滤波器

Correction filters H sit between sampling and reconstruction:
x̃ = W H (S* x + η). Two designs are provided: predefined recovery, where W
is fixed and H minimizes the MSE, and unconstrained recovery, where W and H
are optimized jointly. Inverses are always computed as linear solves after
a condition-number check.
"""
import csv
import logging
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np
from scipy import linalg

from .errors import DimensionMismatchError, SingularGramError, UsageError, ZeroDenominatorError
from .sampling import ReconstructionOperator, SamplingDomain, SamplingOperator, check_divisible
from .spectral import SpectralBasis, SpectralKernel
from .stationarity import as_matrix

logger = logging.getLogger(__name__)

DEFAULT_MAX_CONDITION = 1e12


class FilterMethod(str, Enum):
    PRE = "pre"
    UNC = "unc"
    SUB = "sub"
    SMO = "smo"
    BL = "bl"
    IDENTITY = "identity"


@dataclass(frozen=True)
class CorrectionFilter:
    """K×K correction ``h`` with an optional diagonal response in the U_reduced basis."""

    h: np.ndarray
    method: FilterMethod
    spectral_response: Optional[np.ndarray] = None

    def __post_init__(self):
        h = np.array(self.h, dtype=float, copy=True)
        if h.ndim != 2 or h.shape[0] != h.shape[1]:
            raise DimensionMismatchError(f"correction filter must be square, got {h.shape}")
        if not np.all(np.isfinite(h)):
            raise UsageError(f"{self.method.value} correction filter has non-finite entries")
        h.setflags(write=False)
        object.__setattr__(self, "h", h)

    @property
    def k(self) -> int:
        return int(self.h.shape[0])


@dataclass(frozen=True)
class RecoveryPipeline:
    """N → K (S*) → K (H) → N (W)."""

    sampler: SamplingOperator
    correction: CorrectionFilter
    reconstructor: ReconstructionOperator
    name: str = ""

    def __post_init__(self):
        n, k = self.sampler.n, self.sampler.k
        if self.correction.k != k or self.reconstructor.k != k or self.reconstructor.n != n:
            raise DimensionMismatchError(
                f"pipeline dimensions do not chain: S* {self.sampler.s_star.shape}, "
                f"H {self.correction.h.shape}, W {self.reconstructor.w.shape}"
            )

    @property
    def n(self) -> int:
        return self.sampler.n

    @property
    def k(self) -> int:
        return self.sampler.k

    def operator(self) -> np.ndarray:
        """WH (N×K)."""
        return self.reconstructor.w @ self.correction.h

    def measure(self, x, eta=None) -> np.ndarray:
        """y = S* x + η."""
        y = self.sampler.apply(x)
        return y if eta is None else y + np.asarray(eta, dtype=float)

    def recover_from(self, y) -> np.ndarray:
        return self.operator() @ np.asarray(y, dtype=float)

    def recover(self, x, eta=None) -> np.ndarray:
        return self.recover_from(self.measure(x, eta))

    def with_correction(self, h) -> "RecoveryPipeline":
        return replace(self, correction=CorrectionFilter(h=h, method=self.correction.method))


# ================= 协方差 / 求解工具 =================

def noise_matrix(gamma_eta, k: int) -> np.ndarray:
    """
    Γ_η as a K×K matrix.

    Accepts None (noiseless), a scalar σ², a length-K PSD, or a K×K matrix.
    """
    if gamma_eta is None:
        return np.zeros((k, k))
    if np.isscalar(gamma_eta):
        return float(gamma_eta) * np.eye(k)
    g = as_matrix(gamma_eta)
    if g.ndim == 1:
        g = np.diag(g)
    if g.shape != (k, k):
        raise DimensionMismatchError(f"noise covariance must be {k}×{k}, got {g.shape}")
    return g


def signal_matrix(gamma_x, n: int) -> np.ndarray:
    g = as_matrix(gamma_x)
    if g.shape != (n, n):
        raise DimensionMismatchError(f"signal covariance must be {n}×{n}, got {g.shape}")
    return g


def solve_gram(
    gram: np.ndarray,
    rhs: np.ndarray,
    factor: str,
    max_condition: float = DEFAULT_MAX_CONDITION,
    regularization: float = 0.0,
) -> np.ndarray:
    """
    对称 Gram 矩阵线性求解 gram⁻¹ rhs

    Raises:
        SingularGramError: condition number above ``max_condition``
    """
    g = 0.5 * (gram + gram.T)
    if regularization:
        g = g + regularization * np.eye(g.shape[0])
    cond = float(np.linalg.cond(g)) if g.size else float("inf")
    if not np.isfinite(cond) or cond > max_condition:
        raise SingularGramError(factor, cond)
    logger.debug(f"{factor}: condition number {cond:.3e}")
    try:
        return linalg.solve(g, rhs, assume_a="sym")
    except (linalg.LinAlgError, ValueError) as e:
        logger.warning(f"✗ {factor}: solve failed ({e})")
        raise SingularGramError(factor, cond)


def measurement_gram(s: SamplingOperator, gamma_x, gamma_eta) -> np.ndarray:
    """S*ΓₓS + Γ_η."""
    gx = signal_matrix(gamma_x, s.n)
    return s.s_star @ gx @ s.s + noise_matrix(gamma_eta, s.k)


# ================= 校正滤波器 =================

def correction_predefined(
    s: SamplingOperator,
    w: ReconstructionOperator,
    gamma_x,
    gamma_eta,
    max_condition: float = DEFAULT_MAX_CONDITION,
    regularization: float = 0.0,
) -> CorrectionFilter:
    """
    预定义重建下的 Wiener 校正 H_PRE = (WᵀW)⁻¹ WᵀΓₓS (S*ΓₓS + Γ_η)⁻¹

    Args:
        s: sampling operator (K×N)
        w: fixed reconstruction operator (N×K)
        gamma_x: N×N signal covariance (matrix, CovarianceMatrix or GwssProcess)
        gamma_eta: noise covariance, see ``noise_matrix``
        max_condition: gram condition-number ceiling
        regularization: ε added to both grams

    Returns:
        CorrectionFilter tagged PRE
    """
    if w.n != s.n or w.k != s.k:
        raise DimensionMismatchError(f"S* {s.s_star.shape} and W {w.w.shape} do not match")
    gx = signal_matrix(gamma_x, s.n)
    cross = w.w.T @ gx @ s.s
    g = measurement_gram(s, gx, gamma_eta)
    # X = cross · g⁻¹, g symmetric
    x = solve_gram(g, cross.T, "S*ΓₓS + Γ_η", max_condition, regularization).T
    h = solve_gram(w.w.T @ w.w, x, "W*W", max_condition, regularization)
    return CorrectionFilter(h=h, method=FilterMethod.PRE)


def correction_unconstrained(
    s: SamplingOperator,
    gamma_x,
    gamma_eta,
    max_condition: float = DEFAULT_MAX_CONDITION,
    regularization: float = 0.0,
) -> Tuple[CorrectionFilter, ReconstructionOperator]:
    """
    无约束重建: H_UNC = (S*ΓₓS + Γ_η)⁻¹, W_UNC = ΓₓS
    """
    gx = signal_matrix(gamma_x, s.n)
    g = measurement_gram(s, gx, gamma_eta)
    h = solve_gram(g, np.eye(s.k), "S*ΓₓS + Γ_η", max_condition, regularization)
    w = gx @ s.s
    w = np.array(w, copy=True)
    w.setflags(write=False)
    return (
        CorrectionFilter(h=0.5 * (h + h.T), method=FilterMethod.UNC),
        ReconstructionOperator(w=w, domain=s.domain, meta={"kernel": "Γₓ S"}),
    )


def identity_pipeline(n: int) -> RecoveryPipeline:
    """S = H = W = I."""
    eye = np.eye(n)
    eye.setflags(write=False)
    return RecoveryPipeline(
        sampler=SamplingOperator(s_star=eye, domain=SamplingDomain.VERTEX, meta={"vertex_set": tuple(range(n))}),
        correction=CorrectionFilter(h=np.eye(n), method=FilterMethod.IDENTITY),
        reconstructor=ReconstructionOperator(w=eye, domain=SamplingDomain.VERTEX),
        name=FilterMethod.IDENTITY.value,
    )


# ================= MSE =================

def analytic_mse(pipeline: RecoveryPipeline, gamma_x, gamma_eta) -> float:
    """
    ε = tr(E Γₓ Eᵀ) + tr(WH Γ_η HᵀWᵀ), E = WHS* − I

    The noise contributes only through WHη.
    """
    gx = signal_matrix(gamma_x, pipeline.n)
    ge = noise_matrix(gamma_eta, pipeline.k)
    a = pipeline.operator()
    e = a @ pipeline.sampler.s_star - np.eye(pipeline.n)
    value = float(np.trace(e @ gx @ e.T) + np.trace(a @ ge @ a.T))
    return max(value, 0.0)


def mse_gradient(pipeline: RecoveryPipeline, gamma_x, gamma_eta) -> np.ndarray:
    """
    ∂ε/∂H = WᵀW H (S*ΓₓS + Γ_η) − WᵀΓₓS

    The ordinary real gradient of ``analytic_mse`` with respect to H is
    twice this matrix.
    """
    gx = signal_matrix(gamma_x, pipeline.n)
    w = pipeline.reconstructor.w
    g = measurement_gram(pipeline.sampler, gx, gamma_eta)
    return w.T @ w @ pipeline.correction.h @ g - w.T @ gx @ pipeline.sampler.s


# ================= 谱响应 =================

def _fold(values: np.ndarray, m_ratio: int, k: int) -> np.ndarray:
    return values.reshape(m_ratio, k).sum(axis=0)


def _noise_psd(psd_eta, k: int) -> np.ndarray:
    if np.isscalar(psd_eta):
        return np.full(k, float(psd_eta))
    eta = np.asarray(psd_eta, dtype=float)
    if eta.shape != (k,):
        raise DimensionMismatchError(f"noise PSD must have length K={k}, got {eta.shape}")
    return eta


def _psd_vector(psd_x, n: int) -> np.ndarray:
    p = np.asarray(getattr(psd_x, "psd", psd_x), dtype=float)
    if p.shape != (n,):
        raise DimensionMismatchError(f"signal PSD must have length N={n}, got {p.shape}")
    return p


def _checked_ratio(numerator: np.ndarray, denominator: np.ndarray, what: str) -> np.ndarray:
    scale = max(float(np.abs(denominator).max()), 1.0)
    zero = np.nonzero(np.abs(denominator) <= 1e-15 * scale)[0]
    if zero.size:
        raise ZeroDenominatorError(int(zero[0]), what)
    return numerator / denominator


def spectral_response_pre(
    basis: SpectralBasis,
    s_kernel: SpectralKernel,
    w_kernel: SpectralKernel,
    psd_x,
    psd_eta,
    m_ratio: int,
) -> np.ndarray:
    """
    H_PRE(λ_i) = Σ_l Γₓ W S (λ_{i+Kl}) / (R_W(λ_i) · (Σ_l Γₓ |S|² (λ_{i+Kl}) + Γ_η(λ_i)))

    with R_W(λ_i) = Σ_l |W(λ_{i+Kl})|², i = 0..K-1.
    """
    k = check_divisible(basis.n, m_ratio)
    p = _psd_vector(psd_x, basis.n)
    s = s_kernel.evaluate(basis)
    w = w_kernel.evaluate(basis)
    numerator = _fold(p * w * s, m_ratio, k)
    r_w = _fold(w ** 2, m_ratio, k)
    denominator = r_w * (_fold(p * s ** 2, m_ratio, k) + _noise_psd(psd_eta, k))
    return _checked_ratio(numerator, denominator, "H_PRE denominator")


def spectral_response_unc(
    basis: SpectralBasis,
    s_kernel: SpectralKernel,
    psd_x,
    psd_eta,
    m_ratio: int,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    H_UNC(λ_i) = 1 / (Σ_l Γₓ |S|² (λ_{i+Kl}) + Γ_η(λ_i)), W(λ) = Γₓ(λ) S(λ)

    Returns:
        (length-K response, length-N reconstruction kernel values)
    """
    k = check_divisible(basis.n, m_ratio)
    p = _psd_vector(psd_x, basis.n)
    s = s_kernel.evaluate(basis)
    denominator = _fold(p * s ** 2, m_ratio, k) + _noise_psd(psd_eta, k)
    return _checked_ratio(np.ones(k), denominator, "H_UNC denominator"), p * s


def spectral_residual(h, u_reduced=None) -> float:
    """Off-diagonal Frobenius mass of U_redᵀ H U_red relative to ‖H‖_F."""
    h = np.asarray(getattr(h, "h", h), dtype=float)
    ur = np.eye(h.shape[0]) if u_reduced is None else np.asarray(u_reduced, dtype=float)
    rotated = ur.T @ h @ ur
    total = np.linalg.norm(h)
    if total == 0:
        return 0.0
    return float(np.linalg.norm(rotated - np.diag(np.diag(rotated))) / total)


def attach_response(correction: CorrectionFilter, response, u_reduced=None, tol: float = 1e-8) -> CorrectionFilter:
    """
    Attach a diagonal spectral response after checking it against the matrix.

    The matrix remains the source of truth; a response that does not match
    is logged and dropped.
    """
    response = np.asarray(response, dtype=float)
    ur = np.eye(correction.k) if u_reduced is None else np.asarray(u_reduced, dtype=float)
    diff = np.linalg.norm(ur.T @ correction.h @ ur - np.diag(response))
    scale = max(float(np.linalg.norm(correction.h)), 1e-300)
    if diff > tol * scale:
        logger.warning(f"✗ spectral response does not diagonalize H ({diff / scale:.2e} relative)")
        return correction
    return replace(correction, spectral_response=response)


def write_response_csv(
    basis: SpectralBasis,
    response,
    path: Union[str, Path],
) -> None:
    """CSV (index, lambda, H) for the first K graph frequencies."""
    response = np.asarray(response, dtype=float)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["index", "lambda", "H"])
        for i, value in enumerate(response):
            writer.writerow([i, repr(float(basis.lam[i])), repr(float(value))])
