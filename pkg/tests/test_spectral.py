import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from oracles import brute_period, dense_min_gap, grover_matrix, matrix_power_evolution

from sparsepredict.errors import ArgumentError
from sparsepredict.spectral import (
    FrequencyBits,
    SpectralUnitary,
    SpectrumSpec,
    apply_power,
    build,
    exact_evolution_oracle,
    min_wraparound_gap,
    truncate,
    wrap_distance,
)
from sparsepredict.state import random_state


def test_frequency_bits():
    assert FrequencyBits(3, 2).real == 0.75
    with pytest.raises(ArgumentError):
        FrequencyBits(4, 2)


@given(st.integers(1, 12), st.integers(0, 2**12 - 1))
def test_truncate_exact_grid_points(width, k):
    k %= 1 << width
    assert truncate(k / (1 << width), width) == k


@given(st.floats(0, 1, exclude_max=True), st.integers(1, 16))
def test_truncate_is_floor(omega, width):
    # floor, except that values within 1e-12 below a grid point snap up to it (mod 1)
    h = int(truncate(omega, width))
    offset = (omega - h / (1 << width) + 1e-12) % 1.0
    assert offset < 1.0 / (1 << width) + 2e-12


def test_wrap_distance():
    assert abs(wrap_distance(0.95, 0.05) - 0.1) < 1e-12
    assert wrap_distance(0.3, 0.3) == 0.0


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_dyadic_sparse_properties(seed):
    spec = SpectrumSpec("dyadic-sparse", 6, count=5, gap=1 / 8)
    u = build(spec, seed)
    distinct = u.distinct_frequencies()
    assert len(distinct) == 5
    assert u.is_exact(6)
    assert min_wraparound_gap(u) >= 1 / 8 - 1e-12
    np.testing.assert_allclose(u.eigenvectors.conj().T @ u.eigenvectors, np.eye(64), atol=1e-10)


def test_dyadic_sparse_rejects_overfull():
    with pytest.raises(ArgumentError):
        build(SpectrumSpec("dyadic-sparse", 4, count=5, gap=1 / 4))


def test_build_is_seeded():
    spec = SpectrumSpec("dyadic-sparse", 4, count=3, gap=0.25)
    a, b = build(spec, 7), build(spec, 7)
    np.testing.assert_array_equal(a.frequencies, b.frequencies)
    np.testing.assert_array_equal(a.eigenvectors, b.eigenvectors)


def test_strip_spectrum_layout():
    spec = SpectrumSpec("strip", 7, strips=4, width=1 / 64, gap=1 / 8)
    u = build(spec, 3)
    pitch = spec.gap + spec.width
    centres = 0.5 * pitch + pitch * np.arange(4)
    d = wrap_distance(u.frequencies[:, None], centres[None, :]).min(axis=1)
    assert d.max() <= spec.width / 2 + 1e-12


@pytest.mark.parametrize("a,modulus,n", [(7, 15, 4), (2, 5, 3), (2, 21, 5)])
def test_shor_operator_is_multiplication(a, modulus, n):
    u = build(SpectrumSpec("shor", n, a=a, modulus=modulus))
    dense = u.dense()
    N = 1 << n
    perm = np.zeros((N, N))
    for x in range(N):
        perm[(a * x) % modulus if x < modulus else x, x] = 1.0
    np.testing.assert_allclose(dense, perm, atol=1e-10)
    r = brute_period(a, modulus)
    # the orbit of 1 carries frequencies j/r
    amps = u.to_eigenbasis(np.eye(N)[1])
    freqs = sorted(np.round(u.frequencies[np.abs(amps) > 1e-9] * r, 9))
    assert freqs == list(range(r))


def test_shor_rejects_non_coprime():
    with pytest.raises(ArgumentError):
        SpectrumSpec("shor", 4, a=5, modulus=15)


@pytest.mark.parametrize("n", [3, 4, 6])
def test_grover_spectrum_matches_dense(n):
    u = build(SpectrumSpec("grover", n, marked=1))
    G = grover_matrix(n, 1)
    # package builds (I - 2ss)(O) = -G
    np.testing.assert_allclose(u.dense(), -G, atol=1e-10)
    assert abs(min_wraparound_gap(u) - dense_min_gap(G)) < 1e-9


@given(st.integers(0, 1000), st.integers(-40, 40))
def test_apply_power_matches_matrix_power(seed, t):
    u = build(SpectrumSpec("dyadic-sparse", 3, count=3, gap=0.25), seed)
    xi = random_state(8, np.random.default_rng(seed))
    np.testing.assert_allclose(
        exact_evolution_oracle(u, t, xi), matrix_power_evolution(u.dense(), t, xi), atol=1e-9
    )


def test_apply_power_block_and_group_law(rng):
    u = build(SpectrumSpec("dyadic-sparse", 4, count=4, gap=0.2), 5)
    block = np.stack([random_state(16, rng) for _ in range(3)], axis=1)
    out = apply_power(u, 5, block)
    for j in range(3):
        np.testing.assert_allclose(out[:, j], apply_power(u, 5, block[:, j]), atol=1e-12)
    np.testing.assert_allclose(apply_power(u, -5, out), block, atol=1e-10)
    with pytest.raises(ArgumentError):
        apply_power(u, 1, np.zeros(15))


def test_spectral_unitary_validation():
    with pytest.raises(ArgumentError):
        SpectralUnitary(1, np.array([[1, 1], [0, 1]]), np.array([0.0, 0.5]))
    with pytest.raises(ArgumentError):
        SpectralUnitary(1, np.eye(2), np.array([0.0, 1.0]))


def test_diagonal_twin_shares_spectrum():
    u = build(SpectrumSpec("dyadic-sparse", 3, count=2, gap=0.5), 1)
    twin = u.diagonal_twin()
    np.testing.assert_array_equal(twin.frequencies, u.frequencies)
    np.testing.assert_allclose(twin.dense(), np.diag(np.exp(2j * np.pi * u.frequencies)))


def test_min_gap_single_frequency():
    assert min_wraparound_gap(np.zeros(4)) == 1.0
