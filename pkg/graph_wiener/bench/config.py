"""
实验配置 - JSON 文档经 pydantic 校验

One document describes one experiment: a list of graphs crossed with noise
levels, sampling bands, sampling domains and recovery methods.
"""
import json
import logging
from pathlib import Path
from typing import List, Literal, Optional, Union

from pydantic import BaseModel, Field, field_validator, model_validator

from ..generators import GraphSourceFactory, GraphSpec
from ..kernels import available_kernels
from ..priors import FIRST_K_EIGENVECTORS

logger = logging.getLogger(__name__)

METHOD_IDS = ('unc', 'pre', 'sub', 'smo_pre', 'smo_unc', 'bl', 'identity')


class GraphSpecModel(BaseModel):
    """图生成参数"""
    kind: Literal['sensor', 'er', 'grid'] = Field(description="Generator id")
    n: Optional[int] = Field(default=None, ge=1, description="Vertex count (sensor, er; square grid)")
    k: int = Field(default=6, ge=1, description="kNN neighbours for sensor graphs")
    p: float = Field(default=0.3, gt=0.0, le=1.0, description="Edge probability for ER graphs")
    rows: Optional[int] = Field(default=None, ge=1)
    cols: Optional[int] = Field(default=None, ge=1)
    seed: int = Field(default=0, description="Generator seed; the graph is fixed per seed")
    label: Optional[str] = Field(default=None, description="Name used in the result table (defaults to kind)")

    @model_validator(mode='after')
    def _check_size(self):
        if self.kind == 'grid':
            if (self.rows is None) != (self.cols is None):
                raise ValueError("grid needs both rows and cols, or a square n")
            if self.rows is None and self.n is None:
                raise ValueError("grid needs rows/cols or n")
        elif self.n is None:
            raise ValueError(f"{self.kind} graph requires n")
        return self

    @property
    def name(self) -> str:
        return self.label or self.kind

    def to_spec(self) -> GraphSpec:
        return GraphSpec(kind=self.kind, n=self.n, k=self.k, p=self.p,
                         rows=self.rows, cols=self.cols, seed=self.seed)

    def vertex_count(self) -> int:
        return GraphSourceFactory.create(self.kind).vertex_count(self.to_spec())


class ExperimentConfig(BaseModel):
    """蒙特卡洛实验配置"""
    name: str = Field(default="experiment")
    graphs: List[GraphSpecModel] = Field(min_length=1)
    psd: str = Field(default='gaussian_psd', description="Signal PSD kernel id")
    noise: List[float] = Field(default_factory=lambda: [0.3], min_length=1, description="Noise variances σ²")
    bands: List[Literal['fullband', 'bandlimited']] = Field(default_factory=lambda: ['fullband'], min_length=1)
    domains: List[Literal['vertex', 'spectral']] = Field(
        default_factory=lambda: ['vertex', 'spectral'], min_length=1
    )
    methods: List[str] = Field(min_length=1, description=f"Recovery methods from {list(METHOD_IDS)}")
    ratio: int = Field(default=4, ge=1, description="Sampling ratio M = N/K")
    trials: int = Field(default=20, ge=1)
    base_seed: int = Field(default=0)
    reconstruction_kernel: str = Field(default='cosine', description="Predefined W(λ) kernel id")
    smoothness_eps: float = Field(default=0.1, gt=0.0)
    subspace_generator: str = Field(
        default=FIRST_K_EIGENVECTORS,
        description="Generator A for 'sub': \"first-K-eigenvectors\" or an N×K' CSV path",
    )
    subspace_dim: Optional[int] = Field(default=None, ge=1, description="K' for first-K-eigenvectors (default N/M)")
    regularization: float = Field(default=0.0, ge=0.0)
    max_condition: float = Field(default=1e12, gt=1.0)
    workers: Optional[int] = Field(default=None, ge=1)

    @field_validator('noise')
    @classmethod
    def _nonnegative_noise(cls, v: List[float]) -> List[float]:
        if any(s < 0 for s in v):
            raise ValueError("noise variances must be >= 0")
        return v

    @field_validator('methods')
    @classmethod
    def _known_methods(cls, v: List[str]) -> List[str]:
        unknown = [m for m in v if m not in METHOD_IDS]
        if unknown:
            raise ValueError(f"unknown methods {unknown}; available: {list(METHOD_IDS)}")
        if len(set(v)) != len(v):
            raise ValueError("methods must not repeat")
        return v

    @field_validator('psd', 'reconstruction_kernel')
    @classmethod
    def _known_kernel(cls, v: str) -> str:
        if v not in available_kernels() or v == 'bandlimited':
            raise ValueError(f"kernel '{v}' is not usable here; available: {available_kernels()}")
        return v

    @model_validator(mode='after')
    def _check_grid(self):
        names = [g.name for g in self.graphs]
        if len(set(names)) != len(names):
            raise ValueError(f"graph labels must be unique, got {names}")
        for g in self.graphs:
            n = g.vertex_count()
            if n % self.ratio != 0:
                raise ValueError(f"graph '{g.name}': N={n} is not divisible by ratio M={self.ratio}")
            if self.subspace_dim is not None and self.subspace_dim > n:
                raise ValueError(f"graph '{g.name}': subspace_dim={self.subspace_dim} exceeds N={n}")
        return self


def load_config(path: Union[str, Path]) -> ExperimentConfig:
    """
    读取并校验实验配置

    Raises:
        pydantic.ValidationError: invalid document
        json.JSONDecodeError: not JSON
    """
    with open(path, 'r', encoding='utf-8') as f:
        data = json.load(f)
    config = ExperimentConfig.model_validate(data)
    logger.info(f"Loaded config '{config.name}': {len(config.graphs)} graphs, "
                f"{len(config.methods)} methods, {config.trials} trials")
    return config
