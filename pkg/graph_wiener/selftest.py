"""
自检 - 在 N ∈ {8, 16} 的小图上验证核心不变量

Checks: Wiener optimality under perturbation, dual-path operator equality,
diagonal spectral responses, prior equivalences and PSD-built covariances
commuting with L.
"""
import logging
from dataclasses import dataclass
from typing import Callable, List, Tuple

import networkx as nx
import numpy as np

from .errors import GraphWienerError
from .generators import gen_sensor_knn
from .graph_core import Graph, build_graph, laplacian
from .kernels import cosine_kernel, fullband_kernel, gaussian_psd_kernel
from .priors import (
    SmoothnessPrior,
    SubspacePrior,
    smoothness_correction,
    smoothness_covariance,
    subspace_correction_noiseless,
)
from .sampling import random_vertex_set, spectral_reconstructor, spectral_sampler, vertex_reconstructor, vertex_sampler
from .spectral import SpectralBasis, eigendecompose
from .stationarity import GwssProcess, commutation_residual, is_diagonalizable
from .wiener import (
    RecoveryPipeline,
    analytic_mse,
    correction_predefined,
    mse_gradient,
    spectral_residual,
    spectral_response_pre,
)

logger = logging.getLogger(__name__)

SIGMA2 = 0.3


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


def _instances() -> List[Tuple[str, Graph]]:
    cycle = build_graph(nx.to_numpy_array(nx.cycle_graph(8), weight=None))
    return [("cycle8", cycle), ("sensor16", gen_sensor_knn(16, k=4, seed=1))]


def _optimality(basis: SpectralBasis) -> Tuple[bool, str]:
    process = GwssProcess.from_kernel(basis, gaussian_psd_kernel())
    gx = process.covariance().gamma
    vset = random_vertex_set(basis.n, basis.n // 2, seed=3)
    s = vertex_sampler(basis, fullband_kernel(), vset)
    w = vertex_reconstructor(basis, cosine_kernel(), vset)
    pipeline = RecoveryPipeline(s, correction_predefined(s, w, gx, SIGMA2), w)
    grad = np.linalg.norm(mse_gradient(pipeline, gx, SIGMA2))
    scale = np.linalg.norm(w.w.T @ gx @ s.s)
    best = analytic_mse(pipeline, gx, SIGMA2)
    rng = np.random.default_rng(0)
    worst_drop = 0.0
    for _ in range(20):
        e = rng.standard_normal(pipeline.correction.h.shape)
        e /= np.linalg.norm(e)
        for t in (1e-3, 1e-2):
            value = analytic_mse(pipeline.with_correction(pipeline.correction.h + t * e), gx, SIGMA2)
            worst_drop = max(worst_drop, best - value)
    ok = grad <= 1e-8 * max(scale, 1.0) and worst_drop <= 1e-12
    return ok, f"|grad|={grad:.2e}, worst drop={worst_drop:.2e}"


def _spectral(basis: SpectralBasis) -> Tuple[bool, str]:
    process = GwssProcess.from_kernel(basis, gaussian_psd_kernel())
    s = spectral_sampler(basis, fullband_kernel(), 2)
    w = spectral_reconstructor(basis, cosine_kernel(), 2)
    h = correction_predefined(s, w, process, SIGMA2)
    response = spectral_response_pre(basis, fullband_kernel(), cosine_kernel(), process.psd, SIGMA2, 2)
    residual = spectral_residual(h)
    diff = float(np.abs(np.diag(h.h) - response).max())
    return residual <= 1e-8 and diff <= 1e-9, f"off-diagonal={residual:.2e}, formula diff={diff:.2e}"


def _priors(basis: SpectralBasis) -> Tuple[bool, str]:
    k = basis.n // 2
    vset = random_vertex_set(basis.n, k, seed=5)
    s = vertex_sampler(basis, None, vset)
    w = vertex_reconstructor(basis, cosine_kernel(), vset)

    rng = np.random.default_rng(1)
    a = rng.standard_normal((basis.n, k))
    b = rng.standard_normal((k, k))
    prior_i = SubspacePrior(a=a, sigma_d=np.eye(k))
    prior_r = SubspacePrior(a=a, sigma_d=b @ b.T + k * np.eye(k))
    h_i = subspace_correction_noiseless(prior_i, s, w).h
    h_r = subspace_correction_noiseless(prior_r, s, w).h
    sub_diff = float(np.linalg.norm(h_i - h_r) / np.linalg.norm(h_i))

    h_1 = smoothness_correction(SmoothnessPrior(rho=1.0), basis, s, w).h
    h_10 = smoothness_correction(SmoothnessPrior(rho=10.0), basis, s, w).h
    via_cov = correction_predefined(s, w, smoothness_covariance(SmoothnessPrior(rho=10.0), basis), None).h
    smo_diff = max(float(np.abs(h_1 - h_10).max()), float(np.abs(h_1 - via_cov).max()))
    return sub_diff <= 1e-8 and smo_diff <= 1e-9, f"Σ_d spread={sub_diff:.2e}, ρ/covariance diff={smo_diff:.2e}"


def _stationarity(graph: Graph, basis: SpectralBasis) -> Tuple[bool, str]:
    gamma = GwssProcess.from_kernel(basis, gaussian_psd_kernel()).covariance()
    report = is_diagonalizable(gamma, basis)
    comm = commutation_residual(gamma, laplacian(graph))
    return report.diagonalizable and comm <= 1e-8, f"diag residual={report.residual:.2e}, commutation={comm:.2e}"


def run_selftest() -> List[CheckResult]:
    """运行全部自检并返回结果列表"""
    results: List[CheckResult] = []
    for label, graph in _instances():
        basis = eigendecompose(laplacian(graph))
        checks: List[Tuple[str, Callable[[], Tuple[bool, str]]]] = [
            ("wiener optimality", lambda: _optimality(basis)),
            ("spectral response / dual path", lambda: _spectral(basis)),
            ("prior equivalences", lambda: _priors(basis)),
            ("gwss covariance", lambda: _stationarity(graph, basis)),
        ]
        for name, check in checks:
            try:
                passed, detail = check()
            except GraphWienerError as e:
                passed, detail = False, f"{type(e).__name__}: {e}"
            results.append(CheckResult(f"{label}: {name}", passed, detail))
            logger.info(f"{'✓' if passed else '✗'} {label}: {name} ({detail})")
    return results
