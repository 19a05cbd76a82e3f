"""二维网格图"""
import math

import networkx as nx

from ..errors import GeneratorParameterError
from ..graph_core import Graph, build_graph
from .base import GraphSourceBase, GraphSpec


def gen_grid2d(rows: int, cols: int) -> Graph:
    """4-neighbour lattice with unit weights; vertex r*cols + c sits at (r, c)."""
    if rows < 1 or cols < 1:
        raise GeneratorParameterError(f"grid needs rows, cols >= 1, got {rows}x{cols}")
    g = nx.grid_2d_graph(rows, cols)
    nodelist = [(r, c) for r in range(rows) for c in range(cols)]
    return build_graph(nx.to_numpy_array(g, nodelist=nodelist, dtype=float, weight=None))


def grid_shape(spec: GraphSpec):
    if spec.rows is not None and spec.cols is not None:
        return spec.rows, spec.cols
    if spec.n is not None:
        side = math.isqrt(spec.n)
        if side * side == spec.n:
            return side, side
    raise GeneratorParameterError("grid needs rows and cols (or a square n)")


class GridSource(GraphSourceBase):

    @property
    def source_type(self) -> str:
        return "grid"

    def vertex_count(self, spec: GraphSpec) -> int:
        rows, cols = grid_shape(spec)
        return rows * cols

    def generate(self, spec: GraphSpec) -> Graph:
        return gen_grid2d(*grid_shape(spec))
