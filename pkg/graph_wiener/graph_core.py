"""
图结构 - 加权无向图的构建、校验与拉普拉斯矩阵

Graphs are dense, symmetric, nonnegative weight matrices with zero diagonal.
Connectivity is reported through ``Graph.connected``, never enforced here.
"""
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Tuple, Union

import numpy as np
from scipy.sparse.csgraph import connected_components

from .errors import (
    GraphValidationError,
    NegativeWeightError,
    NonSymmetricError,
    NonzeroDiagonalError,
)

logger = logging.getLogger(__name__)

SYMMETRY_TOL = 1e-12


def _frozen(array: np.ndarray) -> np.ndarray:
    out = np.array(array, dtype=float, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class Graph:
    """Validated weighted undirected graph."""

    weights: np.ndarray
    connected: bool

    @property
    def n(self) -> int:
        return int(self.weights.shape[0])

    @property
    def edge_count(self) -> int:
        return int(np.count_nonzero(np.triu(self.weights, k=1)))

    def edges(self) -> List[Tuple[int, int, float]]:
        """Upper-triangle edge list ``(u, v, w)`` with u < v, row-major order."""
        rows, cols = np.nonzero(np.triu(self.weights, k=1))
        return [(int(u), int(v), float(self.weights[u, v])) for u, v in zip(rows, cols)]


@dataclass(frozen=True)
class DegreeLaplacian:
    degrees: np.ndarray
    laplacian: np.ndarray


def count_components(weights: np.ndarray) -> int:
    if weights.shape[0] == 0:
        return 0
    n_components, _ = connected_components(weights > 0, directed=False)
    return int(n_components)


def build_graph(weights) -> Graph:
    """
    校验权重矩阵并构建 Graph

    Args:
        weights: square symmetric nonnegative matrix with zero diagonal

    Returns:
        Graph (``connected`` flag computed, not enforced)
    """
    a = np.asarray(weights, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise GraphValidationError(f"weights must be a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise GraphValidationError("weights contain non-finite entries")
    if not np.allclose(a, a.T, rtol=0.0, atol=SYMMETRY_TOL):
        worst = np.unravel_index(np.argmax(np.abs(a - a.T)), a.shape)
        raise NonSymmetricError(
            f"weights[{worst[0]}][{worst[1]}]={a[worst]} but weights[{worst[1]}][{worst[0]}]={a[worst[::-1]]}"
        )
    if np.any(a < 0):
        raise NegativeWeightError(f"{int(np.sum(a < 0))} negative weights")
    if np.any(np.diag(a) != 0):
        raise NonzeroDiagonalError(f"self-loops at vertices {np.nonzero(np.diag(a))[0].tolist()}")

    # exact symmetry for downstream eigh
    a = 0.5 * (a + a.T)
    connected = count_components(a) == 1
    if not connected:
        logger.debug(f"Graph with {a.shape[0]} vertices is disconnected")
    return Graph(weights=_frozen(a), connected=connected)


def laplacian(g: Graph) -> DegreeLaplacian:
    """L = D - A."""
    degrees = g.weights.sum(axis=1)
    lap = np.diag(degrees) - g.weights
    return DegreeLaplacian(degrees=_frozen(degrees), laplacian=_frozen(lap))


# ================= 边列表读写 =================

def format_edge_list(g: Graph) -> str:
    """Header line ``n`` followed by ``u v w`` per edge (u < v)."""
    lines = [str(g.n)]
    lines.extend(f"{u} {v} {w:.17g}" for u, v, w in g.edges())
    return "\n".join(lines) + "\n"


def write_edge_list(g: Graph, path: Union[str, Path]) -> None:
    Path(path).write_text(format_edge_list(g), encoding="utf-8")


def parse_edge_list(text: str) -> Graph:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise GraphValidationError("empty edge list")
    try:
        n = int(lines[0])
    except ValueError:
        raise GraphValidationError(f"edge list header must be the vertex count, got {lines[0]!r}")
    a = np.zeros((n, n))
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split()
        if len(parts) not in (2, 3):
            raise GraphValidationError(f"line {lineno}: expected 'u v w', got {line!r}")
        u, v = int(parts[0]), int(parts[1])
        w = float(parts[2]) if len(parts) == 3 else 1.0
        if not (0 <= u < n and 0 <= v < n):
            raise GraphValidationError(f"line {lineno}: vertex out of range for n={n}")
        a[u, v] = w
        a[v, u] = w
    return build_graph(a)


def read_edge_list(path: Union[str, Path]) -> Graph:
    return parse_edge_list(Path(path).read_text(encoding="utf-8"))
