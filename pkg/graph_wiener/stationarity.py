"""
图广义平稳过程 (GWSS) - 过程构建、调制 / 平移算子、可对角化检验与 PSD 估计

Processes are zero-mean and fully described by a PSD over a SpectralBasis;
their covariance is U diag(psd) Uᵀ.
"""
import csv
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, Union

import numpy as np

from .errors import DimensionMismatchError, EmptySampleSetError, IndexOutOfRangeError, UsageError
from .graph_core import Graph
from .spectral import SpectralBasis, SpectralKernel, gft

logger = logging.getLogger(__name__)

PSD_NEGATIVE_TOL = 1e-12


@dataclass(frozen=True)
class CovarianceMatrix:
    gamma: np.ndarray

    @classmethod
    def from_array(cls, gamma, check: bool = True) -> "CovarianceMatrix":
        g = np.array(gamma, dtype=float, copy=True)
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise DimensionMismatchError(f"covariance must be square, got shape {g.shape}")
        if check:
            scale = max(float(np.abs(g).max()) if g.size else 0.0, 1e-300)
            if np.abs(g - g.T).max(initial=0.0) > 1e-10 * scale:
                raise UsageError("covariance is not symmetric")
            g = 0.5 * (g + g.T)
            if g.size and np.linalg.eigvalsh(g).min() < -1e-9 * max(np.trace(g), 1e-300):
                raise UsageError("covariance is not positive semidefinite")
        g.setflags(write=False)
        return cls(gamma=g)

    @property
    def n(self) -> int:
        return int(self.gamma.shape[0])


def as_matrix(gamma) -> np.ndarray:
    """Accept a CovarianceMatrix, a GwssProcess or a plain array."""
    if isinstance(gamma, CovarianceMatrix):
        return gamma.gamma
    if isinstance(gamma, GwssProcess):
        return covariance_from_psd(gamma).gamma
    return np.asarray(gamma, dtype=float)


@dataclass(frozen=True)
class GwssProcess:
    """Zero-mean GWSS process: graph PSD over ``basis``."""

    basis: SpectralBasis
    psd: np.ndarray
    mean: float = 0.0

    def __post_init__(self):
        psd = np.asarray(self.psd, dtype=float)
        if psd.shape != (self.basis.n,):
            raise DimensionMismatchError(f"PSD has shape {psd.shape}, basis has N={self.basis.n}")
        if np.any(psd < -PSD_NEGATIVE_TOL) or not np.all(np.isfinite(psd)):
            raise UsageError("PSD must be finite and nonnegative")
        if self.mean != 0.0:
            raise UsageError("only zero-mean processes are supported")
        psd = np.maximum(psd, 0.0)
        psd.setflags(write=False)
        object.__setattr__(self, "psd", psd)

    @classmethod
    def from_kernel(cls, basis: SpectralBasis, kernel: SpectralKernel) -> "GwssProcess":
        return cls(basis=basis, psd=kernel.evaluate(basis))

    @property
    def n(self) -> int:
        return self.basis.n

    def covariance(self) -> CovarianceMatrix:
        return covariance_from_psd(self)


def covariance_from_psd(process: GwssProcess) -> CovarianceMatrix:
    """Γₓ = U diag(psd) Uᵀ."""
    u = process.basis.u
    g = (u * process.psd) @ u.T
    return CovarianceMatrix.from_array(0.5 * (g + g.T), check=False)


def gwss_noise(n: int, sigma2: float) -> GwssProcess:
    """White noise σ²I as a flat-PSD process."""
    if sigma2 < 0:
        raise UsageError(f"noise variance must be >= 0, got {sigma2}")
    return GwssProcess(basis=SpectralBasis.flat(n), psd=np.full(n, float(sigma2)))


# ================= 调制 / 平移算子 =================

def modulation_phases(n: int) -> np.ndarray:
    """Row of the modulation frame M: e^{j2πk/N}, k = 0..N-1 (every row of M is equal)."""
    return np.exp(2j * np.pi * np.arange(n) / n)


def modulate(basis: SpectralBasis, x, n: int) -> np.ndarray:
    """
    图调制算子 x ⋆ δ_n = M diag(u_0[n], …, u_{N-1}[n]) Uᵀ x

    Returns:
        complex vector of length N (constant across vertices, since the rows
        of M coincide)
    """
    if not (0 <= n < basis.n):
        raise IndexOutOfRangeError(f"vertex {n} out of range for N={basis.n}")
    xhat = gft(basis, x)
    coeff = modulation_phases(basis.n) * basis.u[n, :]
    value = coeff @ xhat
    return np.full(basis.n, value, dtype=complex) if np.ndim(value) == 0 else np.tile(value, (basis.n, 1))


def modulate_all(basis: SpectralBasis, samples) -> np.ndarray:
    """
    Modulation at every vertex for an ensemble.

    Args:
        samples: N×T matrix of signals (columns)

    Returns:
        N×T complex matrix; row n is (x ⋆ δ_n)_m for any m
    """
    xhat = gft(basis, samples)
    return (basis.u * modulation_phases(basis.n)) @ xhat


def xi_matrix(n: int) -> np.ndarray:
    """Ξ[i][l] = exp(-j2π(i-l)/N); unit entries exactly on the diagonal."""
    i = np.arange(n)
    xi = np.exp(-2j * np.pi * (i[:, None] - i[None, :]) / n)
    np.fill_diagonal(xi, 1.0)
    return xi


def modulated_covariance(gamma, basis: SpectralBasis) -> np.ndarray:
    """
    Closed form of E[conj((x⋆δ_n)_m) (x⋆δ_k)_m] = [U (Γ̂ ∘ Ξ) Uᵀ]_{n,k}, Γ̂ = UᵀΓU.
    """
    g_hat = basis.u.T @ as_matrix(gamma) @ basis.u
    return basis.u @ (g_hat * xi_matrix(basis.n)) @ basis.u.T


def translation_rho(graph: Graph) -> float:
    """ρ_G = max_m sqrt(2 d_m (d_m + d̄_m)), d̄_m = Σ_n a_mn d_n / d_m."""
    a = graph.weights
    d = a.sum(axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        d_bar = np.where(d > 0, (a @ d) / np.where(d > 0, d, 1.0), 0.0)
    return float(np.sqrt(2.0 * d * (d + d_bar)).max())


def translation_operator(basis: SpectralBasis, graph: Graph) -> np.ndarray:
    """T_G = U exp(jπ sqrt(Λ/ρ_G)) Uᵀ (unitary, T_G·1 = 1)."""
    rho = translation_rho(graph)
    phases = np.exp(1j * np.pi * np.sqrt(basis.lam / rho)) if rho > 0 else np.ones(basis.n, dtype=complex)
    return (basis.u * phases) @ basis.u.T


def theta_matrix(basis: SpectralBasis, rho: float) -> np.ndarray:
    """Θ[i][l] = exp(jπ(sqrt(λ_i/ρ) - sqrt(λ_l/ρ))); equals 1 inside repeated eigenspaces."""
    s = np.sqrt(basis.lam / rho) if rho > 0 else np.zeros(basis.n)
    return np.exp(1j * np.pi * (s[:, None] - s[None, :]))


def is_translation_stationary(gamma, basis: SpectralBasis, graph: Graph, tol: float = 1e-8):
    """
    GWSS_T covariance condition T_G Γ T_G* = Γ.

    Returns:
        (holds, relative residual)
    """
    g = as_matrix(gamma)
    t = translation_operator(basis, graph)
    norm = np.linalg.norm(g)
    residual = float(np.linalg.norm(t @ g @ t.conj().T - g) / norm) if norm > 0 else 0.0
    return residual <= tol, residual


# ================= 可对角化检验 =================

@dataclass(frozen=True)
class DiagonalizabilityReport:
    diagonalizable: bool
    residual: float

    def __bool__(self) -> bool:
        return self.diagonalizable


def is_diagonalizable(gamma, basis: SpectralBasis, tol: float = 1e-8) -> DiagonalizabilityReport:
    """Off-diagonal Frobenius mass of UᵀΓU relative to its total mass."""
    g = as_matrix(gamma)
    if g.shape != (basis.n, basis.n):
        raise DimensionMismatchError(f"covariance shape {g.shape} does not match N={basis.n}")
    g_hat = basis.u.T @ g @ basis.u
    total = np.linalg.norm(g_hat)
    off = np.linalg.norm(g_hat - np.diag(np.diag(g_hat)))
    residual = float(off / total) if total > 0 else 0.0
    return DiagonalizabilityReport(diagonalizable=residual <= tol, residual=residual)


def commutation_residual(gamma, lap) -> float:
    """‖ΓL - LΓ‖_F / (‖Γ‖_F ‖L‖_F)."""
    g = as_matrix(gamma)
    lmat = lap.laplacian if hasattr(lap, "laplacian") else np.asarray(lap, dtype=float)
    denom = np.linalg.norm(g) * np.linalg.norm(lmat)
    return float(np.linalg.norm(g @ lmat - lmat @ g) / denom) if denom > 0 else 0.0


# ================= 采样与 PSD 估计 =================

def sample_signal(process: GwssProcess, rng_seed, size: int = None) -> np.ndarray:
    """
    x = U diag(sqrt(psd)) z, z ~ N(0, I) from a seeded generator.

    Args:
        rng_seed: int seed or a numpy SeedSequence
        size: number of draws; None returns one length-N vector, otherwise N×size
    """
    rng = np.random.default_rng(rng_seed)
    shape = (process.n,) if size is None else (process.n, size)
    z = rng.standard_normal(shape)
    scale = np.sqrt(np.maximum(process.psd, 0.0))
    if size is None:
        return process.basis.u @ (scale * z)
    return process.basis.u @ (scale[:, None] * z)


def estimate_psd(samples: Union[Sequence, np.ndarray], basis: SpectralBasis) -> np.ndarray:
    """
    对角投影 PSD 估计: psd_hat[i] = mean_t (u_iᵀ x_t)²

    Args:
        samples: sequence of length-N vectors (rows)
    """
    x = np.asarray(samples, dtype=float)
    if x.size == 0:
        raise EmptySampleSetError("PSD estimation needs at least one sample")
    x = np.atleast_2d(x)
    if x.shape[1] != basis.n:
        raise DimensionMismatchError(f"samples have dimension {x.shape[1]}, basis has N={basis.n}")
    coeffs = x @ basis.u
    return np.mean(coeffs ** 2, axis=0)


def write_psd_csv(process: GwssProcess, path: Union[str, Path]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["index", "lambda", "psd"])
        for i, (lam, value) in enumerate(zip(process.basis.lam, process.psd)):
            writer.writerow([i, repr(float(lam)), repr(float(value))])
