"""图生成器抽象基类"""
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from ..errors import DisconnectedAfterRetriesError
from ..graph_core import Graph, build_graph

logger = logging.getLogger(__name__)

DEFAULT_MAX_RETRIES = 100


@dataclass(frozen=True)
class GraphSpec:
    """统一的图生成参数"""
    kind: str  # 'sensor', 'er', 'grid'
    n: Optional[int] = None
    k: int = 6  # kNN neighbours (sensor)
    p: float = 0.3  # edge probability (er)
    rows: Optional[int] = None
    cols: Optional[int] = None
    seed: int = 0


def attempt_seed(seed: int, attempt: int) -> int:
    """Deterministic seed for retry ``attempt`` of a generator seeded with ``seed``."""
    return int(np.random.SeedSequence([seed, attempt]).generate_state(1)[0])


def retry_until_connected(
    kind: str,
    seed: int,
    draw: Callable[[int], np.ndarray],
    max_retries: int = DEFAULT_MAX_RETRIES,
) -> Graph:
    """
    重复生成直到图连通

    Args:
        kind: generator name for log / error messages
        seed: user seed
        draw: maps an attempt seed to a weight matrix
        max_retries: retry budget
    """
    for attempt in range(max_retries):
        graph = build_graph(draw(attempt_seed(seed, attempt)))
        if graph.connected:
            if attempt:
                logger.info(f"{kind}: connected graph after {attempt + 1} attempts")
            return graph
        logger.debug(f"{kind}: attempt {attempt + 1} disconnected, reseeding")
    raise DisconnectedAfterRetriesError(kind, max_retries)


class GraphSourceBase(ABC):
    """图生成器基类"""

    @abstractmethod
    def generate(self, spec: GraphSpec) -> Graph:
        """
        根据参数生成图

        Args:
            spec: generation parameters

        Returns:
            validated Graph
        """
        pass

    @abstractmethod
    def vertex_count(self, spec: GraphSpec) -> int:
        """Number of vertices this graph will have."""
        pass

    @property
    @abstractmethod
    def source_type(self) -> str:
        """生成器类型标识"""
        pass
