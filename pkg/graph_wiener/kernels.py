"""
谱核目录 - 实验中使用的采样 / 重建 / 平滑 / PSD 函数

Kernels are looked up by string id (``get_kernel``) so configs and the CLI
can name them. Parameterized kernels take their parameters as keyword
arguments: ``bandlimited`` needs ``k``, ``smoothness`` accepts ``eps``.
"""
from typing import Callable, Dict, List, Tuple

import numpy as np

from .errors import UnknownKernelError, UsageError
from .spectral import SpectralBasis, SpectralKernel

DEFAULT_SMOOTHNESS_EPS = 0.1


def _normalized(lam: np.ndarray, lambda_max: float) -> np.ndarray:
    """λ / λ_max, all zeros on an edgeless graph."""
    if lambda_max <= 0.0:
        return np.zeros_like(lam)
    return lam / lambda_max


# ================= 标量公式 =================

def fullband_s(lam, lambda_max: float) -> np.ndarray:
    """1 where λ ≥ λ_max/2, else 2 - 2λ/λ_max (no division at λ = 0)."""
    lam = np.asarray(lam, dtype=float)
    return np.where(lam >= 0.5 * lambda_max, 1.0, 2.0 - 2.0 * _normalized(lam, lambda_max))


def bandlimited_s(idx, k: int) -> np.ndarray:
    idx = np.asarray(idx)
    return np.where(idx < k, 1.0, 0.0)


def cosine_w(lam, lambda_max: float) -> np.ndarray:
    return np.cos(0.5 * np.pi * _normalized(np.asarray(lam, dtype=float), lambda_max))


def smoothness_v(lam, lambda_max: float, eps: float = DEFAULT_SMOOTHNESS_EPS) -> np.ndarray:
    return _normalized(np.asarray(lam, dtype=float), lambda_max) + eps


def gaussian_psd(lam, lambda_max: float) -> np.ndarray:
    """exp(-((2λ - λ_max)/sqrt(λ_max))²), peak 1 at λ_max/2."""
    lam = np.asarray(lam, dtype=float)
    if lambda_max <= 0.0:
        return np.ones_like(lam)
    return np.exp(-(((2.0 * lam - lambda_max) / np.sqrt(lambda_max)) ** 2))


# ================= SpectralKernel 构造 =================

def fullband_kernel() -> SpectralKernel:
    return SpectralKernel("fullband", lambda lam, idx, lmax: fullband_s(lam, lmax))


def bandlimited_kernel(k: int) -> SpectralKernel:
    if k < 0:
        raise UsageError(f"bandlimited kernel needs k >= 0, got {k}")
    return SpectralKernel("bandlimited", lambda lam, idx, lmax: bandlimited_s(idx, k))


def cosine_kernel() -> SpectralKernel:
    return SpectralKernel("cosine", lambda lam, idx, lmax: cosine_w(lam, lmax))


def smoothness_kernel(eps: float = DEFAULT_SMOOTHNESS_EPS) -> SpectralKernel:
    return SpectralKernel("smoothness", lambda lam, idx, lmax: smoothness_v(lam, lmax, eps))


def gaussian_psd_kernel() -> SpectralKernel:
    return SpectralKernel("gaussian_psd", lambda lam, idx, lmax: gaussian_psd(lam, lmax))


def constant_kernel(value: float = 1.0) -> SpectralKernel:
    return SpectralKernel("ones" if value == 1.0 else f"const({value:g})",
                          lambda lam, idx, lmax: np.full(lam.shape, float(value)))


def laplacian_kernel() -> SpectralKernel:
    return SpectralKernel("laplacian", lambda lam, idx, lmax: lam)


def from_values(name: str, values) -> SpectralKernel:
    """Kernel defined by its per-index values (e.g. a PSD vector)."""
    table = np.asarray(values, dtype=float)
    return SpectralKernel(name, lambda lam, idx, lmax: table[idx])


def product_kernel(first: SpectralKernel, second: SpectralKernel) -> SpectralKernel:
    return SpectralKernel(
        f"{first.name}*{second.name}",
        lambda lam, idx, lmax: first.fn(lam, idx, lmax) * second.fn(lam, idx, lmax),
    )


KERNEL_CATALOG: Dict[str, Callable[..., SpectralKernel]] = {
    'fullband': fullband_kernel,
    'bandlimited': bandlimited_kernel,
    'cosine': cosine_kernel,
    'smoothness': smoothness_kernel,
    'gaussian_psd': gaussian_psd_kernel,
    'ones': constant_kernel,
    'laplacian': laplacian_kernel,
}


def get_kernel(name: str, k: int = None, eps: float = DEFAULT_SMOOTHNESS_EPS) -> SpectralKernel:
    """
    按名称获取谱核

    Args:
        name: catalog id
        k: passband size for 'bandlimited'
        eps: offset for 'smoothness'
    """
    if name not in KERNEL_CATALOG:
        raise UnknownKernelError(f"Unknown kernel: {name}. Available: {available_kernels()}")
    if name == 'bandlimited':
        if k is None:
            raise UsageError("kernel 'bandlimited' needs the passband size k")
        return bandlimited_kernel(k)
    if name == 'smoothness':
        return smoothness_kernel(eps)
    return KERNEL_CATALOG[name]()


def available_kernels() -> List[str]:
    return list(KERNEL_CATALOG.keys())


def kernel_table(basis: SpectralBasis, kernel: SpectralKernel) -> List[Tuple[int, float, float]]:
    """(i, λ_i, kernel(λ_i)) for every graph frequency."""
    values = kernel.evaluate(basis)
    return [(i, float(lam), float(v)) for i, (lam, v) in enumerate(zip(basis.lam, values))]
