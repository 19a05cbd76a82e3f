import numpy as np
import pytest
from numpy.testing import assert_allclose

from graph_wiener.errors import UnknownKernelError, UsageError
from graph_wiener.kernels import (
    available_kernels,
    bandlimited_s,
    cosine_w,
    from_values,
    fullband_s,
    gaussian_psd,
    get_kernel,
    kernel_table,
    product_kernel,
    smoothness_v,
)

LMAX = 6.0


def test_fullband_values():
    assert fullband_s(0.0, LMAX) == 2.0
    assert fullband_s(LMAX, LMAX) == 1.0
    assert fullband_s(LMAX / 2, LMAX) == 1.0
    assert fullband_s(LMAX / 4, LMAX) == pytest.approx(1.5)


def test_cosine_values():
    assert cosine_w(0.0, LMAX) == 1.0
    assert abs(cosine_w(LMAX, LMAX)) < 1e-15


def test_gaussian_psd_peak():
    assert gaussian_psd(LMAX / 2, LMAX) == 1.0
    assert gaussian_psd(0.0, LMAX) == pytest.approx(np.exp(-LMAX))


def test_smoothness_offset():
    assert smoothness_v(0.0, LMAX) == pytest.approx(0.1)
    assert smoothness_v(LMAX, LMAX, eps=0.5) == pytest.approx(1.5)


def test_bandlimited_indicator():
    assert bandlimited_s(np.arange(6), 2).tolist() == [1, 1, 0, 0, 0, 0]


def test_edgeless_graph_is_finite():
    lam = np.zeros(3)
    assert fullband_s(lam, 0.0).tolist() == [1.0, 1.0, 1.0]
    assert cosine_w(lam, 0.0).tolist() == [1.0, 1.0, 1.0]
    assert gaussian_psd(lam, 0.0).tolist() == [1.0, 1.0, 1.0]


def test_catalog_lookup():
    assert set(available_kernels()) >= {'fullband', 'bandlimited', 'cosine', 'smoothness', 'gaussian_psd'}
    assert get_kernel('cosine').name == 'cosine'
    assert get_kernel('bandlimited', k=3)(np.zeros(5)).tolist() == [1, 1, 1, 0, 0]
    with pytest.raises(UnknownKernelError):
        get_kernel('sinc')
    with pytest.raises(UsageError):
        get_kernel('bandlimited')


def test_kernel_table(sensor32_basis):
    rows = kernel_table(sensor32_basis, get_kernel('cosine'))
    assert len(rows) == 32
    assert rows[0] == (0, 0.0, 1.0)


def test_from_values_and_product(path3, basis_of):
    basis = basis_of(path3)
    values = from_values('psd', [3.0, 2.0, 1.0])
    assert values.evaluate(basis).tolist() == [3.0, 2.0, 1.0]
    both = product_kernel(values, get_kernel('fullband'))
    assert_allclose(both.evaluate(basis), [6.0, 2.0 * (2 - 2 / 3), 1.0])
