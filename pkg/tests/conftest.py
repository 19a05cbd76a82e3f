"""共享测试夹具"""
import networkx as nx
import numpy as np
import pytest

from graph_wiener.generators import gen_erdos_renyi, gen_grid2d, gen_sensor_knn
from graph_wiener.graph_core import build_graph, laplacian
from graph_wiener.kernels import gaussian_psd_kernel
from graph_wiener.spectral import eigendecompose
from graph_wiener.stationarity import GwssProcess


def make_family(kind: str, n: int):
    if kind == 'sensor':
        return gen_sensor_knn(n, k=6, seed=1)
    if kind == 'er':
        return gen_erdos_renyi(n, p=0.3, seed=7)
    rows = max(r for r in range(1, int(np.sqrt(n)) + 1) if n % r == 0)
    return gen_grid2d(rows, n // rows)


@pytest.fixture
def path3():
    return build_graph([[0, 1, 0], [1, 0, 1], [0, 1, 0]])


@pytest.fixture
def cycle8():
    return build_graph(nx.to_numpy_array(nx.cycle_graph(8), weight=None))


@pytest.fixture
def grid2x2():
    return gen_grid2d(2, 2)


@pytest.fixture
def basis_of():
    return lambda g: eigendecompose(laplacian(g))


@pytest.fixture
def cycle8_basis(cycle8):
    return eigendecompose(laplacian(cycle8))


@pytest.fixture
def sensor32():
    return gen_sensor_knn(32, k=6, seed=1)


@pytest.fixture
def sensor32_basis(sensor32):
    return eigendecompose(laplacian(sensor32))


@pytest.fixture
def sensor64_basis():
    return eigendecompose(laplacian(gen_sensor_knn(64, k=6, seed=1)))


@pytest.fixture(params=['sensor', 'er', 'grid'])
def family32(request):
    """(graph, basis) for each generator family at N=32."""
    graph = make_family(request.param, 32)
    return graph, eigendecompose(laplacian(graph))


@pytest.fixture
def gaussian_process():
    return lambda basis: GwssProcess.from_kernel(basis, gaussian_psd_kernel())


@pytest.fixture
def random_orthogonal():
    def _make(k: int, seed: int = 0):
        q, _ = np.linalg.qr(np.random.default_rng(seed).standard_normal((k, k)))
        return q
    return _make


@pytest.fixture
def make_graph():
    return make_family
