"""Tests for bllab.zak: exact discrete identities and IO round trips."""

from __future__ import annotations

import numpy as np
import pytest

from bllab.errors import (
    GridAlignmentError,
    NyquistError,
    ParameterError,
    TruncationLossError,
)
from bllab.zak import (
    SampledWindow,
    ZakGrid,
    gabor_atom,
    grid_from_csv,
    grid_to_csv,
    quasi_extend,
    unitarity_defect,
    window_from_json,
    window_to_json,
    zak_forward,
    zak_inverse,
)


def box_window(N: int = 64, K: int = 8) -> SampledWindow:
    t = -K + np.arange(2 * K * N) / N
    s = np.where((t >= 0) & (t < 1), 1.0, 0.0).astype(complex)
    return SampledWindow(N, K, s)


def gaussian_window(N: int, K: int) -> SampledWindow:
    t = -K + np.arange(2 * K * N) / N
    return SampledWindow(N, K, (2.0 ** 0.25) * np.exp(-np.pi * t * t) + 0j)


def random_window(rng: np.random.Generator, N: int = 64, K: int = 8,
                  pad: int = 0) -> SampledWindow:
    """Random complex window; pad > 0 keeps support inside [-K+pad, K-pad)."""
    L = 2 * K * N
    s = rng.standard_normal(L) + 1j * rng.standard_normal(L)
    if pad:
        t = -K + np.arange(L) / N
        s[(t < -K + pad) | (t >= K - pad)] = 0.0
    return SampledWindow(N, K, s)


def test_window_validation() -> None:
    with pytest.raises(NyquistError):
        SampledWindow(8, 8, np.zeros(2 * 8 * 8))
    with pytest.raises(ParameterError):
        SampledWindow(64, 8, np.zeros(7))


def test_forward_box_is_one() -> None:
    G = zak_forward(box_window())
    np.testing.assert_allclose(G.values, 1.0, atol=1e-12)


def test_forward_delta() -> None:
    N, K = 64, 8
    s = np.zeros(2 * K * N, dtype=complex)
    s[K * N] = 1.0  # t = 0
    G = zak_forward(SampledWindow(N, K, s))
    np.testing.assert_allclose(G.values[0, :], 1.0, atol=1e-14)
    np.testing.assert_allclose(G.values[1:, :], 0.0, atol=1e-14)


def test_forward_matches_direct_sum() -> None:
    rng = np.random.default_rng(0)
    w = random_window(rng, N=16, K=4)
    G = zak_forward(w)
    direct = np.zeros((16, 16), dtype=complex)
    for j in range(16):
        for l in range(16):
            acc = 0.0 + 0.0j
            for k in range(-3, 5):  # k in {-K+1..K}
                m = (4 - k) * 16 + j
                acc += w.samples[m] * np.exp(2j * np.pi * k * l / 16)
            direct[j, l] = acc
    np.testing.assert_allclose(G.values, direct, atol=1e-12)


def test_gaussian_zak_minimum_location_and_refinement() -> None:
    # even N puts (1/2, 1/2) on the lattice where the symmetric cancellation
    # is exact; odd N exposes the decay of the minimum toward the zero
    G = zak_forward(gaussian_window(128, 8))
    j, l = np.unravel_index(np.argmin(np.abs(G.values)), (128, 128))
    assert (j, l) == (64, 64)
    assert abs(G.values[64, 64]) <= 1e-13
    mins = []
    for N in (125, 251):
        G = zak_forward(gaussian_window(N, 8))
        mag = np.abs(G.values)
        j, l = np.unravel_index(np.argmin(mag), mag.shape)
        assert abs(j / N - 0.5) <= 2.0 / N
        assert abs(l / N - 0.5) <= 2.0 / N
        mins.append(mag[j, l])
    assert 0.0 < mins[1] < mins[0]


def test_round_trip_and_inverse_of_ones() -> None:
    rng = np.random.default_rng(1)
    for _ in range(5):
        w = random_window(rng)
        back = zak_inverse(zak_forward(w), w.K)
        np.testing.assert_allclose(back.samples, w.samples, atol=1e-12)
    w = zak_inverse(ZakGrid(64, np.ones((64, 64), dtype=complex)), 8)
    np.testing.assert_allclose(w.samples, box_window().samples, atol=1e-12)
    with pytest.raises(NyquistError):
        zak_inverse(ZakGrid(8, np.ones((8, 8), dtype=complex)), 8)


def test_quasi_extension_rules() -> None:
    rng = np.random.default_rng(2)
    G = zak_forward(random_window(rng))
    N = G.N
    x, y = 5 / N, 9 / N
    base = quasi_extend(G, x, y)
    assert quasi_extend(G, x, y + 1.0) == pytest.approx(base, abs=1e-13)
    assert quasi_extend(G, x + 1.0, y) == pytest.approx(
        base * np.exp(2j * np.pi * y), abs=1e-13)
    assert quasi_extend(G, x + 2.0, y) == pytest.approx(
        base * np.exp(4j * np.pi * y), abs=1e-13)
    # the two extension rules commute
    assert quasi_extend(G, x + 1.0, y + 1.0) == pytest.approx(
        base * np.exp(2j * np.pi * y), abs=1e-13)
    with pytest.raises(GridAlignmentError):
        quasi_extend(G, 0.5 + 0.3 / N, 0.0)


def test_gabor_atom_shift_and_modulation() -> None:
    w = box_window()
    same = gabor_atom(w, 0, 0)
    np.testing.assert_allclose(same.samples, w.samples, atol=0)
    shifted = gabor_atom(w, 0, 1)
    t = w.times()
    np.testing.assert_allclose(
        shifted.samples, np.where((t >= 1) & (t < 2), 1.0, 0.0), atol=0)
    with pytest.raises(ParameterError):
        gabor_atom(w, 0, 8)
    with pytest.raises(ParameterError):
        gabor_atom(w, 64, 0)


def test_gabor_atom_truncation_loss() -> None:
    rng = np.random.default_rng(3)
    w = random_window(rng)  # full support: any shift loses mass
    with pytest.raises(TruncationLossError):
        gabor_atom(w, 0, 1)
    padded = random_window(rng, pad=4)
    gabor_atom(padded, 0, 4)  # fits


def test_covariance_identity() -> None:
    rng = np.random.default_rng(4)
    w = random_window(rng, pad=4)
    G = zak_forward(w)
    N = w.N
    j = np.arange(N)
    for m, n in [(0, 1), (1, 0), (5, -3), (-32, 4), (32, -4), (-7, 2)]:
        Ga = zak_forward(gabor_atom(w, m, n))
        phase = np.exp(2j * np.pi * ((m * j[:, None] - n * j[None, :]) % N) / N)
        np.testing.assert_allclose(Ga.values, phase * G.values, atol=1e-12)


def test_unitarity_defect() -> None:
    rng = np.random.default_rng(5)
    assert unitarity_defect(box_window()) <= 1e-12
    assert unitarity_defect(gaussian_window(256, 16)) <= 1e-12
    w = random_window(rng)
    assert unitarity_defect(w) <= 1e-12 * np.sum(np.abs(w.samples) ** 2) / w.N


def test_window_json_round_trip() -> None:
    rng = np.random.default_rng(6)
    w = random_window(rng, N=16, K=4)
    back = window_from_json(window_to_json(w))
    assert back.N == w.N and back.K == w.K
    np.testing.assert_array_equal(back.samples, w.samples)


def test_grid_csv_round_trip() -> None:
    rng = np.random.default_rng(7)
    G = zak_forward(random_window(rng, N=16, K=4))
    back = grid_from_csv(grid_to_csv(G))
    assert back.N == G.N
    np.testing.assert_allclose(back.values, G.values, rtol=0, atol=0)


def test_completeness_proxy_gram_nonsingular() -> None:
    # min |Zg| > 0 on the grid -> finite section of the shifted/modulated
    # family is well-conditioned (box gives an orthonormal family)
    w = box_window()
    N, M = w.N, 2
    atoms = []
    for m in range(-M, M + 1):
        for n in range(-M, M + 1):
            atoms.append(gabor_atom(w, m, n).samples)
    A = np.array(atoms)
    gram = (A @ A.conj().T) / N
    np.testing.assert_allclose(gram, np.eye(len(atoms)), atol=1e-12)
