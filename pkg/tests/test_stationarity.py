import numpy as np
import pytest
from numpy.testing import assert_allclose

from graph_wiener.errors import DimensionMismatchError, EmptySampleSetError, IndexOutOfRangeError, UsageError
from graph_wiener.generators import gen_erdos_renyi
from graph_wiener.graph_core import laplacian
from graph_wiener.spectral import eigendecompose
from graph_wiener.stationarity import (
    CovarianceMatrix,
    GwssProcess,
    commutation_residual,
    covariance_from_psd,
    estimate_psd,
    gwss_noise,
    is_diagonalizable,
    is_translation_stationary,
    modulate,
    modulate_all,
    modulated_covariance,
    sample_signal,
    theta_matrix,
    translation_operator,
    translation_rho,
    write_psd_csv,
    xi_matrix,
)


def rel_fro(a, b):
    return np.linalg.norm(a - b) / np.linalg.norm(b)


# ---------- processes and covariances ----------

def test_unit_psd_gives_identity(sensor32_basis):
    process = GwssProcess(sensor32_basis, np.ones(32))
    assert_allclose(covariance_from_psd(process).gamma, np.eye(32), atol=1e-10)


def test_dc_psd_gives_all_ones(sensor32_basis):
    psd = np.zeros(32)
    psd[0] = 32.0
    gamma = GwssProcess(sensor32_basis, psd).covariance().gamma
    assert_allclose(gamma, np.ones((32, 32)), atol=1e-10)


def test_gaussian_psd_commutes_with_laplacian(family32, gaussian_process):
    graph, basis = family32
    gamma = gaussian_process(basis).covariance()
    assert commutation_residual(gamma, laplacian(graph)) <= 1e-8
    report = is_diagonalizable(gamma, basis)
    assert report.diagonalizable
    assert report.residual < 1e-10


def test_random_spd_is_not_diagonalizable(sensor32, sensor32_basis):
    b = np.random.default_rng(3).standard_normal((32, 32))
    gamma = b @ b.T
    report = is_diagonalizable(gamma, sensor32_basis)
    assert not report
    assert report.residual > 1e-3
    assert commutation_residual(gamma, laplacian(sensor32)) > 1e-3


def test_identity_is_diagonalizable(sensor32_basis):
    assert is_diagonalizable(np.eye(32), sensor32_basis).diagonalizable


def test_diagonalizable_dimension_check(sensor32_basis):
    with pytest.raises(DimensionMismatchError):
        is_diagonalizable(np.eye(4), sensor32_basis)


def test_negative_psd_rejected(path3, basis_of):
    basis = basis_of(path3)
    with pytest.raises(UsageError):
        GwssProcess(basis, np.array([1.0, -0.5, 1.0]))
    clamped = GwssProcess(basis, np.array([1.0, -1e-15, 1.0]))
    assert clamped.psd[1] == 0.0


def test_psd_length_checked(path3, basis_of):
    with pytest.raises(DimensionMismatchError):
        GwssProcess(basis_of(path3), np.ones(4))


def test_covariance_matrix_validation():
    with pytest.raises(UsageError):
        CovarianceMatrix.from_array([[1.0, 0.5], [0.0, 1.0]])
    with pytest.raises(UsageError):
        CovarianceMatrix.from_array([[1.0, 0.0], [0.0, -1.0]])
    assert CovarianceMatrix.from_array(np.eye(3)).n == 3


def test_gwss_noise(sensor32_basis):
    noise = gwss_noise(32, 0.3)
    assert_allclose(noise.covariance().gamma, 0.3 * np.eye(32))
    assert is_diagonalizable(noise.covariance(), sensor32_basis).diagonalizable
    assert np.all(gwss_noise(8, 0.0).covariance().gamma == 0.0)
    with pytest.raises(UsageError):
        gwss_noise(8, -1.0)


# ---------- sampling and PSD estimation ----------

def test_zero_psd_samples_zero(cycle8_basis):
    x = sample_signal(GwssProcess(cycle8_basis, np.zeros(8)), 11)
    assert np.all(x == 0.0)


def test_sample_signal_deterministic(cycle8_basis, gaussian_process):
    process = gaussian_process(cycle8_basis)
    assert np.array_equal(sample_signal(process, 5), sample_signal(process, 5))
    assert not np.array_equal(sample_signal(process, 5), sample_signal(process, 6))


def test_sample_covariance_matches(cycle8_basis, gaussian_process):
    process = gaussian_process(cycle8_basis)
    x = sample_signal(process, 2024, size=100_000)
    empirical = x @ x.T / x.shape[1]
    assert rel_fro(empirical, process.covariance().gamma) < 0.05


def test_estimate_psd_single_mode(cycle8_basis):
    u0 = cycle8_basis.u[:, 0]
    psd = estimate_psd([3.0 * u0, 3.0 * u0], cycle8_basis)
    expected = np.zeros(8)
    expected[0] = 9.0
    assert_allclose(psd, expected, atol=1e-12)


def test_estimate_psd_zero_and_empty(cycle8_basis):
    assert np.all(estimate_psd([np.zeros(8)], cycle8_basis) == 0.0)
    with pytest.raises(EmptySampleSetError):
        estimate_psd([], cycle8_basis)
    with pytest.raises(DimensionMismatchError):
        estimate_psd([np.zeros(5)], cycle8_basis)


def test_estimate_psd_from_draws(sensor32_basis, gaussian_process):
    process = gaussian_process(sensor32_basis)
    x = sample_signal(process, 7, size=10_000)
    psd_hat = estimate_psd(x.T, sensor32_basis)
    strong = process.psd >= 0.1
    assert_allclose(psd_hat[strong], process.psd[strong], rtol=0.1)
    assert np.all(psd_hat >= 0)


def test_write_psd_csv(tmp_path, path3, basis_of):
    path = tmp_path / "psd.csv"
    write_psd_csv(GwssProcess(basis_of(path3), np.array([1.0, 0.5, 0.25])), path)
    lines = path.read_text().splitlines()
    assert lines[0] == "index,lambda,psd"
    assert lines[1] == "0,0.0,1.0"
    assert len(lines) == 4


# ---------- modulation ----------

def test_modulate_zero(cycle8_basis):
    assert np.all(modulate(cycle8_basis, np.zeros(8), 3) == 0)


def test_modulate_constant_signal(cycle8_basis):
    out = modulate(cycle8_basis, np.ones(8), 5)
    assert out.dtype == complex
    assert_allclose(out, np.ones(8), atol=1e-12)


def test_modulate_index_checked(cycle8_basis):
    with pytest.raises(IndexOutOfRangeError):
        modulate(cycle8_basis, np.ones(8), 8)


def test_xi_structure():
    xi = xi_matrix(8)
    assert np.all(np.diag(xi) == 1.0)
    assert_allclose(xi, xi.conj().T, atol=1e-15)
    off = xi[~np.eye(8, dtype=bool)]
    assert np.all(np.abs(off - 1.0) > 1e-3)


def test_modulated_covariance_monte_carlo(cycle8_basis, gaussian_process):
    process = gaussian_process(cycle8_basis)
    x = sample_signal(process, 99, size=100_000)
    y = modulate_all(cycle8_basis, x)
    empirical = y.conj() @ y.T / x.shape[1]
    closed = modulated_covariance(process.covariance(), cycle8_basis)
    assert rel_fro(empirical, closed) < 0.03


def test_modulation_keeps_zero_mean(cycle8_basis, gaussian_process):
    process = gaussian_process(cycle8_basis)
    trials = 20_000
    y = modulate_all(cycle8_basis, sample_signal(process, 4, size=trials))
    sigma = np.sqrt(np.mean(np.abs(y) ** 2, axis=1))
    assert np.all(np.abs(y.mean(axis=1)) <= 3 * sigma / np.sqrt(trials) * np.sqrt(2))


# ---------- translation ----------

@pytest.mark.parametrize("seed", range(50))
def test_rho_bounds_lambda_max(seed):
    graph = gen_erdos_renyi(20, p=0.3, seed=seed)
    basis = eigendecompose(laplacian(graph))
    assert translation_rho(graph) >= basis.lambda_max - 1e-9


def test_translation_operator_unitary(sensor32, sensor32_basis):
    t = translation_operator(sensor32_basis, sensor32)
    assert_allclose(t @ t.conj().T, np.eye(32), atol=1e-9)
    assert_allclose(t @ np.ones(32), np.ones(32), atol=1e-9)
    x = np.random.default_rng(0).standard_normal(32)
    assert np.linalg.norm(t @ x) == pytest.approx(np.linalg.norm(x), rel=1e-12)


def test_gwss_process_is_translation_stationary(sensor32, sensor32_basis, gaussian_process):
    holds, residual = is_translation_stationary(gaussian_process(sensor32_basis).covariance(), sensor32_basis, sensor32)
    assert holds
    assert residual < 1e-10


def test_theta_identity_on_repeated_eigenvalues(grid2x2, basis_of):
    basis = basis_of(grid2x2)
    assert_allclose(basis.lam, [0, 2, 2, 4], atol=1e-12)
    rho = translation_rho(grid2x2)
    theta = theta_matrix(basis, rho)
    assert_allclose(theta[1, 2], 1.0, atol=1e-8)
    assert abs(theta[0, 3] - 1.0) > 1e-3

    g_hat = np.diag([1.0, 0.8, 0.6, 0.2])
    g_hat[1, 2] = g_hat[2, 1] = 0.3
    gamma = basis.u @ g_hat @ basis.u.T
    t = translation_operator(basis, grid2x2)
    assert_allclose(basis.u @ (g_hat * theta) @ basis.u.T, t @ gamma @ t.conj().T, atol=1e-8)
    holds, _ = is_translation_stationary(gamma, basis, grid2x2)
    assert holds
    assert not is_diagonalizable(gamma, basis).diagonalizable
