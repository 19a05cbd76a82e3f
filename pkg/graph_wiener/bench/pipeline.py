"""
Monte-Carlo 实验管道
graph × noise × band × domain × method 网格上的重复试验与 MSE 汇总
"""
import asyncio
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from tqdm import tqdm

from ..errors import AllTrialsFailedError, GraphWienerError, SingularGramError, UnknownMethodError
from ..generators import generate_graph
from ..graph_core import Graph, laplacian
from ..kernels import bandlimited_kernel, fullband_kernel, get_kernel
from ..priors import (
    SmoothnessPrior,
    SubspacePrior,
    bandlimited_baseline,
    bandlimited_vertex_baseline,
    first_k_eigenvectors_prior,
    smoothness_correction,
    smoothness_unconstrained,
    subspace_correction,
    subspace_prior_from_spec,
)
from ..sampling import (
    SamplingDomain,
    check_divisible,
    random_vertex_set,
    spectral_reconstructor,
    spectral_sampler,
    vertex_reconstructor,
    vertex_sampler,
)
from ..spectral import SpectralBasis, eigendecompose
from ..stationarity import GwssProcess, sample_signal
from ..wiener import (
    RecoveryPipeline,
    analytic_mse,
    correction_predefined,
    correction_unconstrained,
    identity_pipeline,
)
from .config import METHOD_IDS, ExperimentConfig
from .table import MseRow, MseTable, noise_label, to_db

logger = logging.getLogger(__name__)

# role tags for per-trial seed derivation
ROLE_SIGNAL = 1
ROLE_NOISE = 2
ROLE_VERTEX = 3


def trial_seed(base_seed: int, trial_index: int, role: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([base_seed, trial_index, role])


@dataclass(frozen=True)
class GraphContext:
    """Per-graph quantities fixed for the whole experiment."""
    name: str
    graph: Graph
    basis: SpectralBasis
    process: GwssProcess
    gamma_x: np.ndarray
    subspace: Optional[SubspacePrior] = None


@dataclass(frozen=True)
class Cell:
    graph: str
    noise: float
    band: str
    domain: str

    @property
    def label(self) -> str:
        return f"{self.graph}/σ²={noise_label(self.noise)}/{self.band}/{self.domain}"


@dataclass
class TrialResult:
    """‖x̃ − x‖² and analytic MSE per method; ``None`` marks a failed method."""
    errors: Dict[str, Optional[float]] = field(default_factory=dict)
    analytic: Dict[str, Optional[float]] = field(default_factory=dict)
    failures: Dict[str, str] = field(default_factory=dict)


def sampling_kernel(band: str, k: int):
    return fullband_kernel() if band == 'fullband' else bandlimited_kernel(k)


def build_pipelines(
    basis: SpectralBasis,
    gamma_x: np.ndarray,
    methods: List[str],
    domain: str,
    band: str,
    noise: float,
    ratio: int,
    vertex_set: Optional[List[int]] = None,
    reconstruction_kernel: str = 'cosine',
    smoothness_eps: float = 0.1,
    max_condition: float = 1e12,
    regularization: float = 0.0,
    subspace_prior: Optional[SubspacePrior] = None,
    label: str = '',
) -> Dict[str, object]:
    """
    按方法 id 构建恢复管道

    Args:
        domain: 'vertex' (needs ``vertex_set``) or 'spectral'
        band: sampling kernel, 'fullband' or 'bandlimited'
        noise: σ² the Wiener corrections are designed for
        subspace_prior: prior for 'sub' (default: first N/M Laplacian eigenvectors)

    Returns:
        method id -> RecoveryPipeline; a method whose gram is singular maps to
        its SingularGramError, tagged with the method id
    """
    k = check_divisible(basis.n, ratio)
    s_kernel = sampling_kernel(band, k)
    w_kernel = get_kernel(reconstruction_kernel, eps=smoothness_eps)
    prior = SmoothnessPrior(v_kernel=get_kernel('smoothness', eps=smoothness_eps))
    knobs = dict(max_condition=max_condition, regularization=regularization)

    if domain == SamplingDomain.VERTEX.value:
        sampler = vertex_sampler(basis, s_kernel, vertex_set)
        w_pre = vertex_reconstructor(basis, w_kernel, vertex_set)
    else:
        sampler = spectral_sampler(basis, s_kernel, ratio)
        w_pre = spectral_reconstructor(basis, w_kernel, ratio)

    def build(method: str) -> RecoveryPipeline:
        if method == 'unc':
            h, w = correction_unconstrained(sampler, gamma_x, noise, **knobs)
            return RecoveryPipeline(sampler, h, w, name=method)
        if method == 'pre':
            h = correction_predefined(sampler, w_pre, gamma_x, noise, **knobs)
            return RecoveryPipeline(sampler, h, w_pre, name=method)
        if method == 'sub':
            prior_sub = subspace_prior or first_k_eigenvectors_prior(basis, k)
            h = subspace_correction(prior_sub, sampler, w_pre, noise, **knobs)
            return RecoveryPipeline(sampler, h, w_pre, name=method)
        if method == 'smo_pre':
            h = smoothness_correction(prior, basis, sampler, w_pre, **knobs)
            return RecoveryPipeline(sampler, h, w_pre, name=method)
        if method == 'smo_unc':
            h, w = smoothness_unconstrained(prior, basis, sampler, **knobs)
            return RecoveryPipeline(sampler, h, w, name=method)
        if method == 'bl':
            if domain == SamplingDomain.VERTEX.value:
                return bandlimited_vertex_baseline(basis, vertex_set, max_condition)
            return bandlimited_baseline(basis, ratio)
        if method == 'identity':
            return identity_pipeline(basis.n)
        raise UnknownMethodError(f"Unknown method: {method}. Available: {list(METHOD_IDS)}")

    pipelines: Dict[str, object] = {}
    for method in methods:
        try:
            pipelines[method] = build(method)
        except SingularGramError as e:
            pipelines[method] = e.tagged(method)
            logger.debug(f"  ✗ {label} {method}: {e}")
    return pipelines


class ExperimentRunner:
    """实验运行器"""

    def __init__(self, config: ExperimentConfig, workers: Optional[int] = None, progress: bool = True):
        """
        初始化运行器

        Args:
            config: validated experiment configuration
            workers: trial threads (overrides config.workers; default 1)
            progress: show a tqdm bar on stderr
        """
        self.config = config
        self.workers = workers or config.workers or 1
        self.progress = progress
        self.contexts: Dict[str, GraphContext] = {}
        self._spectral_cache: Dict[Tuple[str, float, str], Dict[str, object]] = {}
        self._prepared = False

    # ---------- 准备 ----------

    def prepare(self) -> None:
        """Generate graphs, eigendecompose, build processes and cache spectral pipelines."""
        if self._prepared:
            return
        psd_kernel = get_kernel(self.config.psd, eps=self.config.smoothness_eps)
        for spec in self.config.graphs:
            graph = generate_graph(spec.to_spec())
            basis = eigendecompose(laplacian(graph))
            process = GwssProcess.from_kernel(basis, psd_kernel)
            subspace = None
            if 'sub' in self.config.methods:
                dim = self.config.subspace_dim or graph.n // self.config.ratio
                subspace = subspace_prior_from_spec(basis, self.config.subspace_generator, dim)
            self.contexts[spec.name] = GraphContext(
                name=spec.name,
                graph=graph,
                basis=basis,
                process=process,
                gamma_x=process.covariance().gamma,
                subspace=subspace,
            )
            logger.info(f"✓ Graph '{spec.name}': N={graph.n}, edges={graph.edge_count}, "
                        f"lambda_max={basis.lambda_max:.4g}")

        for cell in self.cells():
            if cell.domain == SamplingDomain.SPECTRAL.value:
                key = (cell.graph, cell.noise, cell.band)
                self._spectral_cache[key] = self.build_pipelines(cell, vertex_set=None)
        self._prepared = True

    def cells(self) -> List[Cell]:
        return [
            Cell(graph=g.name, noise=noise, band=band, domain=domain)
            for g in self.config.graphs
            for noise in self.config.noise
            for band in self.config.bands
            for domain in self.config.domains
        ]

    # ---------- 管道构建 ----------

    def build_pipelines(self, cell: Cell, vertex_set: Optional[List[int]]) -> Dict[str, object]:
        """
        为一个单元构建所有方法的恢复管道

        Returns:
            method id -> RecoveryPipeline, or the SingularGramError raised while building it
        """
        cfg = self.config
        ctx = self.contexts[cell.graph]
        return build_pipelines(
            ctx.basis,
            ctx.gamma_x,
            cfg.methods,
            domain=cell.domain,
            band=cell.band,
            noise=cell.noise,
            ratio=cfg.ratio,
            vertex_set=vertex_set,
            reconstruction_kernel=cfg.reconstruction_kernel,
            smoothness_eps=cfg.smoothness_eps,
            max_condition=cfg.max_condition,
            regularization=cfg.regularization,
            subspace_prior=ctx.subspace,
            label=cell.label,
        )

    # ---------- 单次试验 ----------

    def run_trial(self, cell: Cell, trial_index: int) -> TrialResult:
        """
        单元内的一次试验

        Draws x, η and (vertex domain) the vertex set from seeds derived from
        (base_seed, trial_index, role) and applies every method to the same draw.
        """
        cfg = self.config
        ctx = self.contexts[cell.graph]
        n = ctx.basis.n
        k = n // cfg.ratio

        x = sample_signal(ctx.process, trial_seed(cfg.base_seed, trial_index, ROLE_SIGNAL))
        if cell.domain == SamplingDomain.VERTEX.value:
            vertex_set = random_vertex_set(n, k, trial_seed(cfg.base_seed, trial_index, ROLE_VERTEX))
            pipelines = self.build_pipelines(cell, vertex_set)
        else:
            pipelines = self._spectral_cache[(cell.graph, cell.noise, cell.band)]

        result = TrialResult()
        sigma = float(np.sqrt(cell.noise))
        for method in cfg.methods:
            pipeline = pipelines[method]
            if isinstance(pipeline, GraphWienerError):
                result.errors[method] = None
                result.analytic[method] = None
                result.failures[method] = str(pipeline)
                continue
            noise_rng = np.random.default_rng(trial_seed(cfg.base_seed, trial_index, ROLE_NOISE))
            eta = sigma * noise_rng.standard_normal(pipeline.k)
            x_tilde = pipeline.recover(x, eta)
            result.errors[method] = float(np.sum((x_tilde - x) ** 2))
            result.analytic[method] = analytic_mse(pipeline, ctx.gamma_x, cell.noise)
        return result

    # ---------- 汇总 ----------

    async def run(self) -> MseTable:
        """运行全部单元 × 试验"""
        self.prepare()
        cells = self.cells()
        jobs = [(ci, t) for ci in range(len(cells)) for t in range(self.config.trials)]
        results: Dict[Tuple[int, int], TrialResult] = {}

        logger.info(f"\n{'='*60}")
        logger.info(f"Experiment '{self.config.name}': {len(cells)} cells x {self.config.trials} trials, "
                    f"{self.workers} worker(s)")
        logger.info(f"{'='*60}")

        loop = asyncio.get_running_loop()
        with ThreadPoolExecutor(max_workers=self.workers) as executor, \
                tqdm(total=len(jobs), desc=self.config.name, file=sys.stderr,
                     disable=not self.progress, leave=False) as bar:

            async def _job(ci: int, t: int):
                res = await loop.run_in_executor(executor, self.run_trial, cells[ci], t)
                results[(ci, t)] = res
                bar.update(1)

            await asyncio.gather(*(_job(ci, t) for ci, t in jobs))

        table = MseTable()
        stats = {'cells': len(cells), 'rows': 0, 'failed_trials': 0}
        for ci, cell in enumerate(cells):
            n = self.contexts[cell.graph].basis.n
            per_trial = [results[(ci, t)] for t in range(self.config.trials)]
            for method in self.config.methods:
                row = self._aggregate(cell, method, per_trial, n)
                stats['failed_trials'] += row.failed
                stats['rows'] += 1
                table.add(row)

        logger.info(f"\n{'='*60}")
        logger.info(f"Experiment completed! Cells: {stats['cells']}, Rows: {stats['rows']}, "
                    f"Failed trials: {stats['failed_trials']}")
        logger.info(f"{'='*60}")
        return table

    def _aggregate(self, cell: Cell, method: str, per_trial: List[TrialResult], n: int) -> MseRow:
        errors = [r.errors[method] / n for r in per_trial if r.errors[method] is not None]
        analytic = [r.analytic[method] / n for r in per_trial if r.analytic[method] is not None]
        failed = len(per_trial) - len(errors)
        if not errors:
            reason = next(iter(r.failures.get(method, '') for r in per_trial), '')
            logger.error(f"✗ {cell.label} {method}: all trials failed ({reason})")
            raise AllTrialsFailedError(method, cell.label, len(per_trial))
        if failed:
            logger.warning(f"✗ {cell.label} {method}: {failed}/{len(per_trial)} trials failed")

        values = np.array(errors)
        dbs = to_db(values)
        ddof = 1 if values.size > 1 else 0
        return MseRow(
            graph=cell.graph,
            noise=noise_label(cell.noise),
            band=cell.band,
            domain=cell.domain,
            method=method,
            mse_db=float(to_db(values.mean())),
            std_db=float(dbs.std(ddof=ddof)),
            trials=len(per_trial),
            mse_mean=float(values.mean()),
            mse_std=float(values.std(ddof=ddof)),
            analytic_mean=float(np.mean(analytic)),
            failed=failed,
        )

    def run_experiment(self) -> MseTable:
        return asyncio.run(self.run())


def run_trial(config: ExperimentConfig, trial_index: int) -> Dict[Cell, Dict[str, Optional[float]]]:
    """Squared errors ‖x̃ − x‖² of every method in every cell for one trial."""
    runner = ExperimentRunner(config, workers=1, progress=False)
    runner.prepare()
    return {cell: runner.run_trial(cell, trial_index).errors for cell in runner.cells()}


def run_experiment(config: ExperimentConfig, workers: Optional[int] = None, progress: bool = False) -> MseTable:
    """
    运行实验并汇总为 MseTable

    Raises:
        AllTrialsFailedError: a method failed on every trial of some cell
    """
    return ExperimentRunner(config, workers=workers, progress=progress).run_experiment()
