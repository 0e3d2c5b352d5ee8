"""Discrete Zak transform on a uniform lattice.

A window g is sampled on [-K, K) at step 1/N (sample m holds g(-K + m/N));
its Zak image lives on the N x N grid (j/N, l/N) over the unit square. With
the k-sum running over the 2K support cells the forward map is a zero-padded
DFT per column, which makes the inverse exact and Parseval an identity.

Conventions: Zg(x, y) = sum_k g(x - k) e^{2 pi i k y}; quasi-periodic
extension Zg(x, y+1) = Zg(x, y), Zg(x+1, y) = e^{2 pi i y} Zg(x, y).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    GridAlignmentError,
    NyquistError,
    ParameterError,
    TruncationLossError,
)

__all__ = [
    "SampledWindow",
    "ZakGrid",
    "zak_forward",
    "zak_inverse",
    "quasi_extend",
    "gabor_atom",
    "unitarity_defect",
    "window_to_json",
    "window_from_json",
    "grid_to_csv",
    "grid_from_csv",
]


@dataclass
class SampledWindow:
    """Window samples on [-K, K) at step 1/N; sample m holds g(-K + m/N)."""

    N: int
    K: int
    samples: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if self.N < 1 or self.K < 1:
            raise ParameterError("N and K must be positive integers")
        if 2 * self.K > self.N:
            raise NyquistError(f"need N >= 2K, got N={self.N}, K={self.K}")
        self.samples = np.asarray(self.samples, dtype=complex)
        if self.samples.shape != (2 * self.K * self.N,):
            raise ParameterError(
                f"samples must have length 2*K*N = {2 * self.K * self.N}")

    def times(self) -> np.ndarray:
        """Sample abscissae t_m = -K + m/N."""
        return -self.K + np.arange(2 * self.K * self.N) / self.N

    @property
    def norm(self) -> float:
        """L2 norm sqrt((1/N) sum |g_m|^2)."""
        return float(np.sqrt(np.sum(np.abs(self.samples) ** 2) / self.N))

    def normalized(self) -> "SampledWindow":
        """Copy scaled to unit norm."""
        nr = self.norm
        if nr == 0.0:
            raise ParameterError("cannot normalize the zero window")
        return SampledWindow(self.N, self.K, self.samples / nr)

    def truncated(self, K: int) -> "SampledWindow":
        """Copy restricted to [-K, K); samples outside are dropped."""
        if not 1 <= K <= self.K:
            raise ParameterError(f"need 1 <= K <= {self.K}, got K={K}")
        lo = (self.K - K) * self.N
        return SampledWindow(self.N, K, self.samples[lo:lo + 2 * K * self.N].copy())


@dataclass
class ZakGrid:
    """Zak samples values[j, l] = Zg(j/N, l/N) on the unit square."""

    N: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != (self.N, self.N):
            raise ParameterError("values must be an N x N array")

    def value_at(self, j: int, l: int) -> complex:
        """Grid value at arbitrary integer indices via the quasi-periodic rules."""
        p, jr = divmod(int(j), self.N)
        lr = int(l) % self.N
        phase = np.exp(2j * np.pi * p * lr / self.N)
        return complex(phase * self.values[jr, lr])


def zak_forward(w: SampledWindow) -> ZakGrid:
    """Zak transform: values[j, l] = sum_k g(j/N - k) e^{2 pi i k l/N}.

    The k-sum covers the stored support cells, k in {-K+1, ..., K}; it is
    evaluated as a zero-padded DFT along k (exact, no approximation).
    """
    N, K = w.N, w.K
    S2 = w.samples.reshape(2 * K, N)  # S2[i, j] = g(j/N - (K - i))
    R = np.fft.fft(S2, n=N, axis=0)  # R[l, j] = sum_i S2[i,j] e^{-2pi i il/N}
    phase = np.exp(2j * np.pi * K * np.arange(N) / N)
    return ZakGrid(N, R.T * phase[None, :])


def zak_inverse(G: ZakGrid, K: int) -> SampledWindow:
    """Window with support [-K, K) whose Zak image matches G.

    Inverts the forward DFT: g(j/N - k) = (1/N) sum_l values(j,l)
    e^{-2 pi i k l/N} over the same k-set {-K+1..K}. When G carries
    k-bandwidth beyond 2K (possible only if 2K < N) that content is
    discarded; the round trip with zak_forward is exact otherwise.
    """
    N = G.N
    if 2 * K > N:
        raise NyquistError(f"need 2K <= N, got N={N}, K={K}")
    phase = np.exp(-2j * np.pi * K * np.arange(N) / N)
    R = (G.values * phase[None, :]).T
    c = np.fft.ifft(R, axis=0)  # c[i, j] = g(j/N - (K - i)) for i < 2K
    return SampledWindow(N, K, c[: 2 * K, :].reshape(-1))


def quasi_extend(G: ZakGrid, x: float, y: float) -> complex:
    """Zak value at a lattice point anywhere in the plane.

    Reduces (x, y) into the unit square with Zg(x, y+1) = Zg(x, y) and
    Zg(x+1, y) = e^{2 pi i y} Zg(x, y). (x, y) must lie on (1/N)Z^2.
    """
    N = G.N
    jf, lf = x * N, y * N
    j, l = round(jf), round(lf)
    if abs(jf - j) > 1e-9 or abs(lf - l) > 1e-9:
        raise GridAlignmentError(f"({x}, {y}) is not on the 1/{N} lattice")
    return G.value_at(j, l)


def gabor_atom(w: SampledWindow, m: int, n: int) -> SampledWindow:
    """Samples of the time-frequency shift e^{2 pi i m t} g(t - n).

    Requires |n| < K and |m| <= N/2 (no aliasing on the sample grid). The
    translate must keep essentially all mass inside [-K, K): shifted-out mass
    above 1e-12 * ||g|| raises TruncationLossError.
    """
    N, K = w.N, w.K
    if abs(n) >= K:
        raise ParameterError(f"|n| must be < K = {K}")
    if abs(m) > N // 2:
        raise ParameterError(f"|m| must be <= N/2 = {N // 2}")
    L = 2 * K * N
    shifted = np.zeros(L, dtype=complex)
    d = n * N
    if d >= 0:
        shifted[d:] = w.samples[: L - d]
        lost = w.samples[L - d:] if d > 0 else w.samples[:0]
    else:
        shifted[: L + d] = w.samples[-d:]
        lost = w.samples[:-d]
    lost_norm = float(np.sqrt(np.sum(np.abs(lost) ** 2) / N))
    if lost_norm > 1e-12 * w.norm:
        raise TruncationLossError(
            f"translate by n={n} loses mass {lost_norm:.3e}")
    # e^{2 pi i m t_j} with t_j = -K + j/N reduces to e^{2 pi i (m j mod N)/N}
    mod = np.exp(2j * np.pi * ((m * np.arange(L)) % N) / N)
    return SampledWindow(N, K, mod * shifted)


def unitarity_defect(w: SampledWindow) -> float:
    """|mean-square of Zg over the grid - squared norm of g| (a Parseval check)."""
    G = zak_forward(w)
    zak_mass = float(np.sum(np.abs(G.values) ** 2)) / (w.N * w.N)
    win_mass = float(np.sum(np.abs(w.samples) ** 2)) / w.N
    return abs(zak_mass - win_mass)


def window_to_json(w: SampledWindow) -> str:
    """Serialize a window as {"N":..., "K":..., "samples": [[re, im], ...]}."""
    payload = {
        "N": w.N,
        "K": w.K,
        "samples": [[float(z.real), float(z.imag)] for z in w.samples],
    }
    return json.dumps(payload)


def window_from_json(text: str) -> SampledWindow:
    """Inverse of window_to_json."""
    d = json.loads(text)
    arr = np.array([complex(re, im) for re, im in d["samples"]])
    return SampledWindow(int(d["N"]), int(d["K"]), arr)


def grid_to_csv(G: ZakGrid) -> str:
    """CSV rows j, columns l, cells "re+im*i" with 17 significant digits."""
    lines = []
    for row in G.values:
        lines.append(",".join(f"{z.real:.17g}{z.imag:+.17g}i" for z in row))
    return "\n".join(lines) + "\n"


def grid_from_csv(text: str) -> ZakGrid:
    """Inverse of grid_to_csv."""
    rows = [ln for ln in text.strip().splitlines() if ln]
    vals = [[complex(cell.replace("i", "j")) for cell in ln.split(",")]
            for ln in rows]
    arr = np.array(vals, dtype=complex)
    return ZakGrid(arr.shape[0], arr)
