"""图生成器工厂"""
from typing import List

from ..errors import UsageError
from .base import GraphSourceBase, GraphSpec
from .erdos_renyi import ErdosRenyiSource, gen_erdos_renyi
from .grid import GridSource, gen_grid2d
from .sensor import SensorKnnSource, gen_sensor_knn


class GraphSourceFactory:
    """图生成器工厂类"""

    _sources = {
        'sensor': SensorKnnSource,
        'er': ErdosRenyiSource,
        'grid': GridSource,
    }

    @classmethod
    def create(cls, kind: str) -> GraphSourceBase:
        """
        创建生成器实例

        Args:
            kind: 'sensor', 'er', 'grid'
        """
        if kind not in cls._sources:
            raise UsageError(f"Unknown graph kind: {kind}. Available: {list(cls._sources.keys())}")

        return cls._sources[kind]()

    @classmethod
    def get_available_sources(cls) -> List[str]:
        return list(cls._sources.keys())


def generate_graph(spec: GraphSpec):
    return GraphSourceFactory.create(spec.kind).generate(spec)


__all__ = [
    'GraphSourceBase',
    'GraphSpec',
    'SensorKnnSource',
    'ErdosRenyiSource',
    'GridSource',
    'GraphSourceFactory',
    'generate_graph',
    'gen_sensor_knn',
    'gen_erdos_renyi',
    'gen_grid2d',
]
