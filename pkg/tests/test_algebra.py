import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from blockhole.algebra import (
    DimensionError,
    cconv,
    cconv_direct,
    ccorr,
    ccorr_direct,
    circ,
    dft,
    dft_matrix,
    idft,
    tri_prod,
)
from oracles import loop_cconv, loop_ccorr, naive_dft

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


@st.composite
def vector_pair(draw, max_n=64):
    n = draw(st.integers(1, max_n))
    x = draw(arrays(np.float64, n, elements=finite))
    y = draw(arrays(np.float64, n, elements=finite))
    return x, y


def test_circ_small_cases():
    np.testing.assert_array_equal(circ([1, 0, 0]), np.eye(3))
    np.testing.assert_array_equal(circ([5, 7]), [[5, 7], [7, 5]])
    np.testing.assert_array_equal(circ([1, 2, 3]), [[1, 3, 2], [2, 1, 3], [3, 2, 1]])


def test_circ_columns_are_cyclic_shifts():
    v = np.arange(1.0, 6.0)
    c = circ(v)
    for j in range(5):
        np.testing.assert_array_equal(c[:, j], np.roll(v, j))


def test_cconv_examples():
    y = np.array([4.0, -1.0, 2.5])
    np.testing.assert_allclose(cconv([1, 0, 0], y), y, atol=1e-12)
    np.testing.assert_allclose(cconv([1, 2, 3], [0, 1, 0]), [3, 1, 2], atol=1e-12)


def test_ccorr_examples():
    y = np.array([4.0, -1.0, 2.5])
    np.testing.assert_allclose(ccorr([1, 0, 0], y), y, atol=1e-12)
    np.testing.assert_allclose(ccorr([1, 2, 3], [0, 1, 0]), [2, 1, 3], atol=1e-12)


def test_length_mismatch():
    with pytest.raises(DimensionError):
        cconv([1, 2], [1, 2, 3])
    with pytest.raises(DimensionError):
        ccorr([1, 2], [1, 2, 3])
    with pytest.raises(DimensionError):
        tri_prod([1], [1, 2], [1, 2])


def test_rejects_nonfinite():
    with pytest.raises(ValueError):
        cconv([np.nan, 1.0], [1.0, 1.0])


def test_dft_examples():
    np.testing.assert_allclose(dft([1, 0, 0, 0, 0]), np.ones(5), atol=1e-12)
    np.testing.assert_allclose(dft([1, 1]), [2, 0], atol=1e-12)
    np.testing.assert_allclose(idft(dft([3, 1, 4, 1])), [3, 1, 4, 1], atol=1e-9)


@pytest.mark.parametrize("n", [1, 2, 3, 5, 25, 30, 49])
def test_dft_matches_naive_sum_for_mixed_radix_lengths(n):
    x = np.random.default_rng(n).normal(size=n)
    np.testing.assert_allclose(dft(x), naive_dft(x), atol=1e-9)
    np.testing.assert_allclose(dft_matrix(n) @ x, naive_dft(x), atol=1e-9)


def test_idft_is_scaled_conjugate_transpose():
    n = 6
    f = dft_matrix(n)
    np.testing.assert_allclose(np.linalg.inv(f), np.conj(f).T / n, atol=1e-12)
    x = np.random.default_rng(0).normal(size=n) + 1j
    np.testing.assert_allclose(idft(x), np.conj(f).T @ x / n, atol=1e-12)


def test_tri_prod_examples():
    a = np.array([1.0, 2.0, 3.0])
    b = np.array([-1.0, 0.5, 2.0])
    assert tri_prod(np.ones(3), a, b) == pytest.approx(a @ b)
    assert tri_prod([1j], [1j], [1j]) == pytest.approx(-1j)


def test_tri_prod_conjugate_pairing_is_real():
    rng = np.random.default_rng(3)
    for _ in range(20):
        w = rng.normal(size=2).astype(complex)
        e = rng.normal(size=2) + 1j * rng.normal(size=2)
        direct = sum(w[i] * e[i] * np.conj(e[i]) for i in range(2))
        val = tri_prod(w, e, np.conj(e))
        assert abs(val.imag) < 1e-12
        assert val == pytest.approx(direct)


@given(vector_pair())
def test_convolution_paths_agree(pair):
    x, y = pair
    scale = 1.0 + np.abs(x).sum() * np.abs(y).max()
    np.testing.assert_allclose(cconv(x, y), loop_cconv(x, y), atol=1e-9 * scale)
    np.testing.assert_allclose(cconv_direct(x, y), loop_cconv(x, y), atol=1e-9 * scale)


@given(vector_pair())
def test_correlation_paths_agree(pair):
    x, y = pair
    scale = 1.0 + np.abs(x).sum() * np.abs(y).max()
    np.testing.assert_allclose(ccorr(x, y), loop_ccorr(x, y), atol=1e-9 * scale)
    np.testing.assert_allclose(ccorr_direct(x, y), loop_ccorr(x, y), atol=1e-9 * scale)


@given(vector_pair())
def test_circ_times_vector_is_convolution(pair):
    x, y = pair
    scale = 1.0 + np.abs(x).sum() * np.abs(y).max()
    np.testing.assert_allclose(circ(x) @ y, cconv_direct(x, y), atol=1e-12 * scale)
    np.testing.assert_allclose(circ(x).T @ y, ccorr_direct(x, y), atol=1e-12 * scale)


@settings(max_examples=30)
@given(st.integers(1, 64), st.integers(0, 2**32 - 1))
def test_fourier_diagonalizes_circulant(n, seed):
    v = np.random.default_rng(seed).normal(size=n)
    f = dft_matrix(n)
    rebuilt = np.linalg.inv(f) @ np.diag(f @ v) @ f
    np.testing.assert_allclose(rebuilt, circ(v), atol=1e-9)


@given(st.integers(1, 40), st.integers(0, 2**32 - 1))
def test_adjoint_identity(n, seed):
    # x . (y conv z) == y . (z corr x); the correlation operands are not interchangeable
    x, y, z = np.random.default_rng(seed).normal(size=(3, n))
    assert x @ cconv(y, z) == pytest.approx(y @ ccorr(z, x), abs=1e-9)


def test_convolution_commutes_correlation_does_not():
    x, y = np.random.default_rng(11).normal(size=(2, 7))
    np.testing.assert_allclose(cconv(x, y), cconv(y, x), atol=1e-12)
    assert np.max(np.abs(ccorr(x, y) - ccorr(y, x))) > 1e-6
