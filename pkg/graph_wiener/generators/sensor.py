"""随机传感器图 (kNN, 单位正方形)"""
import logging

import numpy as np
from scipy.spatial import cKDTree

from ..errors import GeneratorParameterError
from ..graph_core import Graph
from .base import DEFAULT_MAX_RETRIES, GraphSourceBase, GraphSpec, retry_until_connected

logger = logging.getLogger(__name__)


def knn_weights(coords: np.ndarray, k: int) -> np.ndarray:
    """Unweighted kNN adjacency, symmetrized with OR (edge if either end selects the other)."""
    n = coords.shape[0]
    _, idx = cKDTree(coords).query(coords, k=min(k + 1, n))
    a = np.zeros((n, n))
    for i, row in enumerate(idx):
        # coincident points can push i out of column 0
        neighbours = [int(j) for j in row if j != i][:k]
        a[i, neighbours] = 1.0
    return np.maximum(a, a.T)


def gen_sensor_knn(n: int, k: int = 6, seed: int = 0, max_retries: int = DEFAULT_MAX_RETRIES) -> Graph:
    """
    生成随机传感器图

    Args:
        n: vertex count
        k: neighbours selected by each vertex
        seed: RNG seed (coordinates uniform on [0,1]^2)
        max_retries: reseeding budget until connected
    """
    if not (n > k >= 1):
        raise GeneratorParameterError(f"sensor graph needs n > k >= 1, got n={n}, k={k}")

    def draw(attempt_seed: int) -> np.ndarray:
        coords = np.random.default_rng(attempt_seed).uniform(0.0, 1.0, size=(n, 2))
        return knn_weights(coords, k)

    return retry_until_connected("sensor", seed, draw, max_retries)


class SensorKnnSource(GraphSourceBase):

    @property
    def source_type(self) -> str:
        return "sensor"

    def vertex_count(self, spec: GraphSpec) -> int:
        return int(spec.n or 0)

    def generate(self, spec: GraphSpec) -> Graph:
        if spec.n is None:
            raise GeneratorParameterError("sensor graph requires n")
        return gen_sensor_knn(spec.n, spec.k, spec.seed)
