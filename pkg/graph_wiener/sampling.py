"""
采样与重建算子 - 顶点域 (I_M G) 与图频域 (谱折叠 / 复制)

Operators are dense and immutable. Spectral operators are built in matrix
form and checked against the fold/replicate route on fixed random vectors
when constructed.
"""
import csv
import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np

from .errors import (
    DimensionMismatchError,
    DuplicateVertexError,
    IndexOutOfRangeError,
    KExceedsNError,
    NonUnitaryReducedError,
    NotDivisibleError,
    OperatorConsistencyError,
    UsageError,
)
from .spectral import SpectralBasis, SpectralKernel, kernel_filter_matrix

logger = logging.getLogger(__name__)

UNITARY_TOL = 1e-9
DUAL_PATH_TOL = 1e-10
DUAL_PATH_VECTORS = 20


class SamplingDomain(str, Enum):
    VERTEX = "vertex"
    SPECTRAL = "spectral"


def _condition(gram: np.ndarray) -> float:
    if gram.size == 0:
        return float("inf")
    return float(np.linalg.cond(gram))


@dataclass(frozen=True)
class SamplingOperator:
    """c = S* x, ``s_star`` is K×N."""

    s_star: np.ndarray
    domain: SamplingDomain
    meta: Dict[str, Any] = field(default_factory=dict)

    @property
    def k(self) -> int:
        return int(self.s_star.shape[0])

    @property
    def n(self) -> int:
        return int(self.s_star.shape[1])

    @property
    def s(self) -> np.ndarray:
        """S (N×K)."""
        return self.s_star.T

    def gram_condition(self) -> float:
        """Riesz check: condition number of S*S (K×K)."""
        return _condition(self.s_star @ self.s_star.T)

    def apply(self, x) -> np.ndarray:
        return self.s_star @ np.asarray(x, dtype=float)


@dataclass(frozen=True)
class ReconstructionOperator:
    """x̃ = W d, ``w`` is N×K."""

    w: np.ndarray
    domain: SamplingDomain
    meta: Dict[str, Any] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return int(self.w.shape[0])

    @property
    def k(self) -> int:
        return int(self.w.shape[1])

    def gram_condition(self) -> float:
        return _condition(self.w.T @ self.w)

    def apply(self, d) -> np.ndarray:
        return self.w @ np.asarray(d, dtype=float)


def _readonly(array: np.ndarray) -> np.ndarray:
    out = np.array(array, dtype=float, copy=True)
    out.setflags(write=False)
    return out


def _report_condition(op, what: str):
    """Log the Riesz-bound condition number of a freshly built operator."""
    logger.debug(f"{what}: K={op.k}, gram condition={op.gram_condition():.3e}")
    return op


# ================= 顶点域 =================

def _check_vertex_set(n: int, vertex_set: Sequence[int]) -> List[int]:
    idx = [int(v) for v in vertex_set]
    if not idx:
        raise UsageError("vertex set must contain at least one vertex")
    bad = [v for v in idx if not (0 <= v < n)]
    if bad:
        raise IndexOutOfRangeError(f"vertices {bad} out of range for N={n}")
    if len(set(idx)) != len(idx):
        raise DuplicateVertexError(f"vertex set has duplicates: {idx}")
    return idx


def random_vertex_set(n: int, k: int, seed) -> List[int]:
    """
    随机选取 k 个顶点 (无放回, 升序)

    Args:
        seed: int or numpy SeedSequence
    """
    if k > n:
        raise KExceedsNError(f"cannot sample k={k} vertices from N={n}")
    if k < 1:
        raise UsageError(f"vertex set size must be >= 1, got {k}")
    rng = np.random.default_rng(seed)
    return sorted(int(v) for v in rng.choice(n, size=k, replace=False))


def vertex_sampler(
    basis: SpectralBasis,
    prefilter_kernel: Optional[SpectralKernel],
    vertex_set: Sequence[int],
) -> SamplingOperator:
    """S* = I_M G, G the prefilter (identity when ``prefilter_kernel`` is None)."""
    idx = _check_vertex_set(basis.n, vertex_set)
    if prefilter_kernel is None:
        s_star = np.eye(basis.n)[idx, :]
    else:
        s_star = kernel_filter_matrix(basis, prefilter_kernel)[idx, :]
    op = SamplingOperator(
        s_star=_readonly(s_star),
        domain=SamplingDomain.VERTEX,
        meta={"vertex_set": tuple(idx), "kernel": prefilter_kernel.name if prefilter_kernel else None},
    )
    return _report_condition(op, "vertex sampler")


def vertex_reconstructor(
    basis: SpectralBasis,
    kernel: Optional[SpectralKernel],
    vertex_set: Sequence[int],
) -> ReconstructionOperator:
    """W = G_W I_Mᵀ: interpolate the K samples with the filter G_W = U W(Λ) Uᵀ."""
    idx = _check_vertex_set(basis.n, vertex_set)
    g = np.eye(basis.n) if kernel is None else kernel_filter_matrix(basis, kernel)
    op = ReconstructionOperator(
        w=_readonly(g[:, idx]),
        domain=SamplingDomain.VERTEX,
        meta={"vertex_set": tuple(idx), "kernel": kernel.name if kernel else None},
    )
    return _report_condition(op, "vertex reconstructor")


# ================= 图频域 =================

def check_divisible(n: int, m_ratio: int) -> int:
    """K = N / M."""
    if m_ratio < 1 or n % m_ratio != 0:
        raise NotDivisibleError(n, m_ratio)
    return n // m_ratio


def _check_reduced(u_reduced, k: int) -> np.ndarray:
    if u_reduced is None:
        return np.eye(k)
    ur = np.asarray(u_reduced, dtype=float)
    if ur.shape != (k, k):
        raise DimensionMismatchError(f"u_reduced must be {k}×{k}, got {ur.shape}")
    if np.abs(ur.T @ ur - np.eye(k)).max() > UNITARY_TOL:
        raise NonUnitaryReducedError("u_reduced is not orthogonal")
    return ur


def spectral_fold(basis: SpectralBasis, kernel: SpectralKernel, m_ratio: int, xhat) -> np.ndarray:
    """
    谱折叠: ĉ(λ_i) = Σ_l S(λ_{i+Kl}) x̂(λ_{i+Kl})

    Args:
        xhat: length-N spectrum, or N×T for T spectra
    """
    k = check_divisible(basis.n, m_ratio)
    xhat = np.asarray(xhat, dtype=float)
    if xhat.shape[0] != basis.n:
        raise DimensionMismatchError(f"spectrum has {xhat.shape[0]} rows, basis has N={basis.n}")
    values = kernel.evaluate(basis)
    weighted = values * xhat if xhat.ndim == 1 else values[:, None] * xhat
    return weighted.reshape((m_ratio, k) + xhat.shape[1:]).sum(axis=0)


def spectral_replicate(basis: SpectralBasis, kernel: SpectralKernel, m_ratio: int, dhat) -> np.ndarray:
    """Lift a length-K spectrum to length N by index-mod-K replication, then weight by W(λ)."""
    check_divisible(basis.n, m_ratio)
    dhat = np.asarray(dhat, dtype=float)
    values = kernel.evaluate(basis)
    lifted = np.concatenate([dhat] * m_ratio, axis=0)
    return values * lifted if lifted.ndim == 1 else values[:, None] * lifted


def _verify_dual_path(matrix: np.ndarray, route, dim: int, what: str) -> None:
    rng = np.random.default_rng(0)
    probes = rng.standard_normal((dim, DUAL_PATH_VECTORS))
    via_matrix = matrix @ probes
    via_route = route(probes)
    scale = max(float(np.abs(via_matrix).max()), 1.0)
    err = float(np.abs(via_matrix - via_route).max())
    if err > DUAL_PATH_TOL * scale:
        raise OperatorConsistencyError(f"{what}: matrix and fold/replicate paths differ by {err:.3e}")
    logger.debug(f"{what}: dual-path check ok (max diff {err:.2e})")


def spectral_sampler(
    basis: SpectralBasis,
    kernel: SpectralKernel,
    m_ratio: int,
    u_reduced=None,
) -> SamplingOperator:
    """
    图频域采样算子 S* = U_red D_samp S(Λ) Uᵀ

    Args:
        kernel: sampling kernel S(λ)
        m_ratio: folding ratio M (must divide N)
        u_reduced: K×K orthogonal matrix, identity when None
    """
    k = check_divisible(basis.n, m_ratio)
    ur = _check_reduced(u_reduced, k)
    values = kernel.evaluate(basis)
    d_samp = np.tile(np.eye(k), m_ratio)
    s_star = ur @ (d_samp * values) @ basis.u.T

    _verify_dual_path(
        s_star,
        lambda x: ur @ spectral_fold(basis, kernel, m_ratio, basis.u.T @ x),
        basis.n,
        f"spectral sampler ({kernel.name}, M={m_ratio})",
    )
    op = SamplingOperator(
        s_star=_readonly(s_star),
        domain=SamplingDomain.SPECTRAL,
        meta={"m_ratio": m_ratio, "kernel": kernel.name, "u_reduced": _readonly(ur)},
    )
    return _report_condition(op, f"spectral sampler ({kernel.name}, M={m_ratio})")


def spectral_reconstructor(
    basis: SpectralBasis,
    kernel: SpectralKernel,
    m_ratio: int,
    u_reduced=None,
) -> ReconstructionOperator:
    """W = U W(Λ) D_sampᵀ U_redᵀ."""
    k = check_divisible(basis.n, m_ratio)
    ur = _check_reduced(u_reduced, k)
    values = kernel.evaluate(basis)
    w = (basis.u * values) @ np.tile(ur.T, (m_ratio, 1))

    _verify_dual_path(
        w,
        lambda d: basis.u @ spectral_replicate(basis, kernel, m_ratio, ur.T @ d),
        k,
        f"spectral reconstructor ({kernel.name}, M={m_ratio})",
    )
    op = ReconstructionOperator(
        w=_readonly(w),
        domain=SamplingDomain.SPECTRAL,
        meta={"m_ratio": m_ratio, "kernel": kernel.name, "u_reduced": _readonly(ur)},
    )
    return _report_condition(op, f"spectral reconstructor ({kernel.name}, M={m_ratio})")


def write_matrix_csv(matrix, path: Union[str, Path]) -> None:
    """Dense operator dump, one matrix row per CSV row."""
    m = np.atleast_2d(np.asarray(matrix, dtype=float))
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        for row in m:
            writer.writerow([repr(float(v)) for v in row])
