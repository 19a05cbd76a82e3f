import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy import linalg

from graph_wiener.errors import DimensionMismatchError, NonFiniteKernelValueError
from graph_wiener.graph_core import build_graph, laplacian
from graph_wiener.kernels import (
    constant_kernel,
    cosine_kernel,
    from_values,
    gaussian_psd_kernel,
    laplacian_kernel,
    product_kernel,
)
from graph_wiener.spectral import SpectralBasis, SpectralKernel, eigendecompose, gft, igft, kernel_filter_matrix


def test_path3_spectrum(path3):
    basis = eigendecompose(laplacian(path3))
    assert_allclose(basis.lam, [0.0, 1.0, 3.0], atol=1e-12)
    assert basis.lam[0] == 0.0
    assert np.all(basis.u[:, 0] == 1.0 / np.sqrt(3))
    assert basis.lambda_max == pytest.approx(3.0)


def test_cycle8_spectrum(cycle8_basis):
    expected = np.sort(2 - 2 * np.cos(2 * np.pi * np.arange(8) / 8))
    assert_allclose(cycle8_basis.lam, expected, atol=1e-12)


def test_basis_is_orthogonal_and_ascending(family32):
    _, basis = family32
    assert_allclose(basis.u.T @ basis.u, np.eye(basis.n), atol=1e-10)
    assert np.all(np.diff(basis.lam) >= 0)
    assert np.all(basis.lam >= 0)


def test_decomposition_reproduces_laplacian(family32):
    graph, basis = family32
    lap = laplacian(graph).laplacian
    assert_allclose((basis.u * basis.lam) @ basis.u.T, lap, atol=1e-9)


def test_sign_convention(sensor32_basis):
    u = sensor32_basis.u
    for j in range(u.shape[1]):
        col = u[:, j]
        first = col[np.abs(col) > 1e-9 * np.abs(col).max()][0]
        assert first > 0


def test_single_vertex():
    basis = eigendecompose(laplacian(build_graph([[0.0]])))
    assert basis.lam.tolist() == [0.0]
    assert basis.u.tolist() == [[1.0]]


def test_basis_is_read_only(path3):
    basis = eigendecompose(laplacian(path3))
    with pytest.raises(ValueError):
        basis.u[0, 0] = 2.0


def test_gft_inverse(sensor32_basis):
    x = np.random.default_rng(0).standard_normal(32)
    assert_allclose(igft(sensor32_basis, gft(sensor32_basis, x)), x, atol=1e-12)
    xs = np.random.default_rng(1).standard_normal((32, 5))
    assert_allclose(igft(sensor32_basis, gft(sensor32_basis, xs)), xs, atol=1e-12)


def test_gft_constant_signal(path3):
    basis = eigendecompose(laplacian(path3))
    xhat = gft(basis, np.ones(3))
    assert_allclose(xhat, [np.sqrt(3), 0, 0], atol=1e-12)


def test_gft_dimension_mismatch(sensor32_basis):
    with pytest.raises(DimensionMismatchError):
        gft(sensor32_basis, np.ones(31))
    with pytest.raises(DimensionMismatchError):
        igft(sensor32_basis, np.ones(33))


def test_non_finite_kernel(path3):
    basis = eigendecompose(laplacian(path3))
    bad = SpectralKernel("bad", lambda lam, idx, lmax: np.where(lam > 2, np.nan, 1.0))
    with pytest.raises(NonFiniteKernelValueError):
        bad.evaluate(basis)


def test_kernel_call_broadcasts_scalars():
    k = SpectralKernel("two", lambda lam, idx, lmax: 2.0)
    assert k(np.array([0.0, 1.0, 2.0])).tolist() == [2.0, 2.0, 2.0]


def test_unit_kernel_filter_is_identity(sensor32_basis):
    assert_allclose(kernel_filter_matrix(sensor32_basis, constant_kernel(1.0)), np.eye(32), atol=1e-10)


def test_flat_basis():
    basis = SpectralBasis.flat(4)
    assert basis.lambda_max == 0.0
    assert basis.u.tolist() == np.eye(4).tolist()


def test_gft_preserves_energy(family32):
    _, basis = family32
    x = np.random.default_rng(2).standard_normal((basis.n, 100))
    assert_allclose(np.linalg.norm(gft(basis, x), axis=0), np.linalg.norm(x, axis=0), rtol=1e-12)


def test_kernel_filters_commute(sensor32_basis):
    f = cosine_kernel().evaluate(sensor32_basis)
    g = gaussian_psd_kernel().evaluate(sensor32_basis)
    gf = kernel_filter_matrix(sensor32_basis, from_values('f', f))
    gg = kernel_filter_matrix(sensor32_basis, from_values('g', g))
    product = kernel_filter_matrix(sensor32_basis, product_kernel(cosine_kernel(), gaussian_psd_kernel()))
    assert_allclose(gf @ gg, product, atol=1e-12)
    assert_allclose(gf @ gg, gg @ gf, atol=1e-12)


def test_laplacian_kernel_reproduces_laplacian(family32):
    graph, basis = family32
    assert_allclose(kernel_filter_matrix(basis, laplacian_kernel()), laplacian(graph).laplacian, atol=1e-9)


def test_cosine_response_is_one_at_zero_frequency(family32):
    _, basis = family32
    assert cosine_kernel().evaluate(basis)[0] == 1.0
    assert cosine_kernel()(0.0, lambda_max=basis.lambda_max) == pytest.approx(1.0)


@pytest.mark.parametrize("blocks, components", [
    ([[[0, 1], [1, 0]], [[0, 1], [1, 0]]], 2),
    ([[[0, 1, 1], [1, 0, 1], [1, 1, 0]], [[0]], [[0, 2], [2, 0]]], 3),
    ([[[0]], [[0]], [[0]], [[0]]], 4),
])
def test_zero_eigenvalues_count_components(blocks, components):
    weights = linalg.block_diag(*[np.array(b, dtype=float) for b in blocks])
    graph = build_graph(weights)
    basis = eigendecompose(laplacian(graph))
    assert int(np.sum(basis.lam == 0.0)) == components
    assert components == basis.n or basis.lam[components] > 0
