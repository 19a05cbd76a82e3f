"""
graph_wiener - 图信号广义采样与 Wiener 恢复

Modules:
    graph_core    graph validation, Laplacian, edge-list I/O
    generators    sensor / Erdős–Rényi / grid graph generators
    spectral      eigendecomposition and graph Fourier transform
    kernels       spectral kernel catalog
    stationarity  GWSS processes, modulation / translation operators
    sampling      vertex and spectral sampling / reconstruction operators
    wiener        graph Wiener correction filters and the MSE functional
    priors        subspace and smoothness priors, bandlimited baselines
    bench         seeded Monte-Carlo experiment harness
"""
from .errors import GraphWienerError
from .graph_core import Graph, build_graph, laplacian
from .spectral import SpectralBasis, eigendecompose, gft, igft
from .stationarity import GwssProcess, covariance_from_psd, gwss_noise, sample_signal
from .sampling import spectral_reconstructor, spectral_sampler, vertex_reconstructor, vertex_sampler
from .wiener import RecoveryPipeline, analytic_mse, correction_predefined, correction_unconstrained

__version__ = "0.1.0"

__all__ = [
    'GraphWienerError',
    'Graph',
    'build_graph',
    'laplacian',
    'SpectralBasis',
    'eigendecompose',
    'gft',
    'igft',
    'GwssProcess',
    'covariance_from_psd',
    'gwss_noise',
    'sample_signal',
    'spectral_reconstructor',
    'spectral_sampler',
    'vertex_reconstructor',
    'vertex_sampler',
    'RecoveryPipeline',
    'analytic_mse',
    'correction_predefined',
    'correction_unconstrained',
]
