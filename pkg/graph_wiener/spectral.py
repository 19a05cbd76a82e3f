"""
图谱分析 - 拉普拉斯特征分解、图傅里叶变换 (GFT) 与谱核滤波

All arithmetic is real: U is orthogonal and the conjugate transpose is the
transpose. Kernels are evaluated per graph frequency and receive the
eigenvalue, its index and lambda_max.
"""
import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import linalg

from .errors import ConvergenceFailureError, DimensionMismatchError, NonFiniteKernelValueError
from .graph_core import DegreeLaplacian

logger = logging.getLogger(__name__)

# relative threshold for "zero" eigenvalues and sign-convention pivots
ZERO_TOL = 1e-9

KernelFn = Callable[[np.ndarray, np.ndarray, float], np.ndarray]


@dataclass(frozen=True)
class SpectralBasis:
    """Orthogonal eigenvectors (columns of ``u``) and ascending eigenvalues ``lam``."""

    u: np.ndarray
    lam: np.ndarray

    @property
    def n(self) -> int:
        return int(self.lam.shape[0])

    @property
    def lambda_max(self) -> float:
        return float(self.lam[-1]) if self.n else 0.0

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.n)

    @classmethod
    def flat(cls, n: int) -> "SpectralBasis":
        """U = I, Λ = 0. Any flat PSD is stationary on it."""
        u = np.eye(n)
        lam = np.zeros(n)
        u.setflags(write=False)
        lam.setflags(write=False)
        return cls(u=u, lam=lam)


@dataclass(frozen=True)
class SpectralKernel:
    """A function on the graph spectrum, addressable by ``name``."""

    name: str
    fn: KernelFn

    def __call__(self, lam, idx=None, lambda_max: float = None) -> np.ndarray:
        lam = np.atleast_1d(np.asarray(lam, dtype=float))
        if idx is None:
            idx = np.arange(lam.shape[0])
        if lambda_max is None:
            lambda_max = float(lam.max()) if lam.size else 0.0
        values = np.broadcast_to(np.asarray(self.fn(lam, np.asarray(idx), float(lambda_max)), dtype=float), lam.shape)
        return np.array(values)

    def evaluate(self, basis: SpectralBasis) -> np.ndarray:
        """Kernel values at every graph frequency of ``basis``."""
        values = self(basis.lam, basis.indices, basis.lambda_max)
        if not np.all(np.isfinite(values)):
            bad = np.nonzero(~np.isfinite(values))[0]
            raise NonFiniteKernelValueError(f"kernel '{self.name}' is not finite at indices {bad.tolist()}")
        return values


def _apply_sign_convention(u: np.ndarray) -> np.ndarray:
    """Make the first non-negligible entry of each column positive."""
    for j in range(u.shape[1]):
        col = u[:, j]
        pivots = np.nonzero(np.abs(col) > ZERO_TOL * np.abs(col).max())[0]
        if pivots.size and col[pivots[0]] < 0:
            u[:, j] = -col
    return u


def eigendecompose(dl: DegreeLaplacian) -> SpectralBasis:
    """
    拉普拉斯矩阵特征分解

    Args:
        dl: degree/Laplacian pair (L symmetric)

    Returns:
        SpectralBasis with ascending eigenvalues, sign-normalized eigenvectors
        and u_0 = 1/sqrt(N) exactly when the zero eigenvalue is simple.
    """
    lap = np.asarray(dl.laplacian, dtype=float)
    try:
        lam, u = linalg.eigh(lap)
    except linalg.LinAlgError as e:
        raise ConvergenceFailureError(f"symmetric eigensolver failed: {e}")

    order = np.argsort(lam, kind="stable")
    lam = lam[order]
    u = np.array(u[:, order], copy=True)

    scale = max(float(np.abs(lam).max()) if lam.size else 0.0, 1.0)
    lam = np.where(np.abs(lam) <= ZERO_TOL * scale, 0.0, lam)
    lam = np.maximum(lam, 0.0)

    u = _apply_sign_convention(u)
    n = lam.shape[0]
    if n == 1 or (n > 1 and lam[0] == 0.0 and lam[1] > 0.0):
        u[:, 0] = 1.0 / np.sqrt(n)

    u.setflags(write=False)
    lam.setflags(write=False)
    logger.debug(f"Eigendecomposition: N={n}, lambda_max={lam[-1] if n else 0.0:.4g}")
    return SpectralBasis(u=u, lam=lam)


def _check_rows(basis: SpectralBasis, x: np.ndarray, what: str) -> np.ndarray:
    x = np.asarray(x)
    if x.shape[0] != basis.n:
        raise DimensionMismatchError(f"{what} has {x.shape[0]} rows, basis has N={basis.n}")
    return x


def gft(basis: SpectralBasis, x) -> np.ndarray:
    """x̂ = Uᵀx (columns of a 2-D ``x`` are transformed independently)."""
    return basis.u.T @ _check_rows(basis, x, "signal")


def igft(basis: SpectralBasis, xhat) -> np.ndarray:
    """x = U x̂."""
    return basis.u @ _check_rows(basis, xhat, "spectrum")


def kernel_filter_matrix(basis: SpectralBasis, kernel: SpectralKernel) -> np.ndarray:
    """G = U diag(kernel(λ)) Uᵀ (symmetric)."""
    values = kernel.evaluate(basis)
    g = (basis.u * values) @ basis.u.T
    return 0.5 * (g + g.T)
