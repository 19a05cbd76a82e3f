"""Erdős–Rényi 随机图"""
import networkx as nx
import numpy as np

from ..errors import GeneratorParameterError
from ..graph_core import Graph
from .base import DEFAULT_MAX_RETRIES, GraphSourceBase, GraphSpec, retry_until_connected


def gen_erdos_renyi(n: int, p: float = 0.3, seed: int = 0, max_retries: int = DEFAULT_MAX_RETRIES) -> Graph:
    """G(n, p) with unit weights, reseeded until connected."""
    if n < 1:
        raise GeneratorParameterError(f"ER graph needs n >= 1, got {n}")
    if not (0.0 < p <= 1.0):
        raise GeneratorParameterError(f"ER graph needs 0 < p <= 1, got p={p}")

    def draw(attempt_seed: int) -> np.ndarray:
        g = nx.gnp_random_graph(n, p, seed=attempt_seed)
        return nx.to_numpy_array(g, nodelist=range(n), dtype=float, weight=None)

    return retry_until_connected("er", seed, draw, max_retries)


class ErdosRenyiSource(GraphSourceBase):

    @property
    def source_type(self) -> str:
        return "er"

    def vertex_count(self, spec: GraphSpec) -> int:
        return int(spec.n or 0)

    def generate(self, spec: GraphSpec) -> Graph:
        if spec.n is None:
            raise GeneratorParameterError("ER graph requires n")
        return gen_erdos_renyi(spec.n, spec.p, spec.seed)
