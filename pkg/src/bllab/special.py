"""Smooth profiles and closed-form building blocks.

Everything here is a pure pointwise function used by the window constructions
and the coefficient diagnostics: the exp(-1/u) smoothstep family (bump_rho,
transition_nu, the phase profile inside H_lambda), the singular test weight
f_ab and its periodized translate h_ab, the anisotropic modulus f_abg with its
closed-form x-derivatives, the phase ramp H_lambda, the continuity gauge
phi_rs, and the binomial-series coefficients taylor_b.

All functions accept scalars or numpy arrays and broadcast elementwise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, SingularPointError

__all__ = [
    "BumpProfile",
    "DEFAULT_PROFILE",
    "smoothstep",
    "bump_rho",
    "transition_nu",
    "f_ab",
    "h_ab",
    "f_abg",
    "f_abg_partial_x",
    "H_lambda",
    "F_abg",
    "phi_rs",
    "taylor_b",
    "taylor_b_sequence",
]


@dataclass(frozen=True)
class BumpProfile:
    """Transition half-width eta for the smooth cutoffs; 0 < eta < 1/4."""

    eta: float = 0.1

    def __post_init__(self) -> None:
        if not (0.0 < self.eta < 0.25):
            raise ParameterError(f"eta must lie in (0, 1/4), got {self.eta}")


DEFAULT_PROFILE = BumpProfile(0.1)


def smoothstep(u):
    """C-infinity step: 0 for u <= 0, 1 for u >= 1, e^{-1/u}-blend between.

    S(u) = a/(a+b) with a = exp(-1/u), b = exp(-1/(1-u)); satisfies
    S(u) + S(1-u) = 1 and S(1/2) = 1/2.
    """
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    out[u >= 1.0] = 1.0
    mid = (u > 0.0) & (u < 1.0)
    if np.any(mid):
        um = u[mid]
        a = np.exp(-1.0 / um)
        b = np.exp(-1.0 / (1.0 - um))
        out[mid] = a / (a + b)
    return out if out.ndim else float(out)


def bump_rho(t, profile: BumpProfile = DEFAULT_PROFILE):
    """Even plateau cutoff: 1 on |t| <= eta, 0 on |t| >= 2*eta, smooth between."""
    t = np.asarray(t, dtype=float)
    return smoothstep((2.0 * profile.eta - np.abs(t)) / profile.eta)


def transition_nu(t, profile: BumpProfile = DEFAULT_PROFILE):
    """Decreasing ramp: 1 on t <= -2*eta, 0 on t >= 2*eta, nu(t)+nu(-t)=1."""
    t = np.asarray(t, dtype=float)
    return 1.0 - smoothstep((t + 2.0 * profile.eta) / (4.0 * profile.eta))


def f_ab(x, y, alpha: float, beta: float):
    """Singular weight [1 + (1 - |x-1/2|^alpha) e^{2 pi i y}]^{-beta} on [0,1]^2.

    Uses the principal logarithm for the -beta power. The base vanishes exactly
    at (1/2, 1/2), which raises SingularPointError (tested by exact equality of
    the coordinates).
    """
    if alpha <= 0 or beta <= 0:
        raise ParameterError("alpha and beta must be positive")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(x < 0) or np.any(x > 1) or np.any(y < 0) or np.any(y > 1):
        raise ParameterError("f_ab is defined on the closed unit square")
    if np.any((x == 0.5) & (y == 0.5)):
        raise SingularPointError("f_ab is singular at (1/2, 1/2)")
    h = 1.0 - np.abs(x - 0.5) ** alpha
    z = 1.0 + h * np.exp(2j * np.pi * y)
    out = np.exp(-beta * np.log(z))
    return out if out.ndim else complex(out)


def h_ab(x, y, alpha: float, beta: float, a: float, b: float):
    """1-periodic extension of f_ab translated so its singularity sits at (a, b)."""
    x = np.mod(np.asarray(x, dtype=float) - a + 0.5, 1.0)
    y = np.mod(np.asarray(y, dtype=float) - b + 0.5, 1.0)
    return f_ab(x, y, alpha, beta)


def f_abg(x, y, alpha: float, beta: float, gamma: float, a_neg: float = 1.0):
    """Anisotropic modulus (x^{a/g} + |y|^{b/g})^g, with slope a_neg for x < 0.

    Returns ((-a_neg*x)^{alpha/gamma} + |y|^{beta/gamma})^gamma on x < 0.
    Nonnegative; vanishes only at the origin.
    """
    if alpha <= 0 or beta <= 0 or gamma <= 0 or a_neg <= 0:
        raise ParameterError("alpha, beta, gamma, a_neg must be positive")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    base = np.where(x >= 0, x, -a_neg * x)
    out = (base ** (alpha / gamma) + np.abs(y) ** (beta / gamma)) ** gamma
    return out if out.ndim else float(out)


def _partial_coeff_rows(alpha: float, gamma: float, k: int) -> dict[int, float]:
    # row k of the closed-form derivative table, by differentiating row k-1
    row = {1: alpha}
    for kk in range(1, k):
        nxt: dict[int, float] = {}
        for m, c in row.items():
            nxt[m] = nxt.get(m, 0.0) + c * (m * alpha / gamma - kk)
            nxt[m + 1] = nxt.get(m + 1, 0.0) + c * (gamma - m) * (alpha / gamma)
        row = nxt
    return row


def f_abg_partial_x(x, y, alpha: float, beta: float, gamma: float, k: int,
                    a_neg: float = 1.0):
    """k-th x-partial of f_abg via the closed-form sum.

    d^k/dx^k = sum_m C_{m,k} (x^{a/g} + |y|^{b/g})^{g-m} x^{m a/g - k} for
    x > 0, with the coefficient table C generated by the differentiation
    recurrence; for x < 0 the same sum in (-a_neg*x) carries the prefactor
    (-a_neg)^k. Requires gamma < min(alpha/k, beta/k, 1) so every x-exponent
    is positive.
    """
    if k < 1:
        raise ParameterError("k must be a positive integer")
    if not (0 < gamma < min(alpha / k, beta / k, 1.0)):
        raise ParameterError("need 0 < gamma < min(alpha/k, beta/k, 1)")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any((x == 0.0) & (y == 0.0)):
        raise SingularPointError("derivative undefined at the origin")
    row = _partial_coeff_rows(alpha, gamma, k)
    base = np.where(x >= 0, x, -a_neg * x)
    sign = np.where(x >= 0, 1.0, (-a_neg) ** k)
    X = base ** (alpha / gamma)
    Y = np.abs(y) ** (beta / gamma)
    out = np.zeros(np.broadcast(x, y).shape)
    with np.errstate(divide="ignore", invalid="ignore"):
        for m, c in row.items():
            term = c * (X + Y) ** (gamma - m) * base ** (m * alpha / gamma - k)
            out = out + np.where(base == 0.0, 0.0, term)
    out = sign * out
    return out if out.ndim else float(out)


def H_lambda(x, y, lam: float, profile: BumpProfile = DEFAULT_PROFILE):
    """Phase ramp phi(y / x^lam) on the horn {x > 0, 0 <= y <= x^lam}, else 0.

    phi(u) = smoothstep(u) - 1, so values lie in [-1, 0]; the jump across
    y = 0 is exactly -1 and therefore invisible in e^{2 pi i H}. The origin
    falls in the zero branch.
    """
    if lam <= 0:
        raise ParameterError("lambda must be positive")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    x, y = np.broadcast_arrays(x, y)
    out = np.zeros(x.shape)
    with np.errstate(invalid="ignore"):
        pos = x > 0
        cap = np.zeros_like(out)
        cap[pos] = x[pos] ** lam
        mask = pos & (y >= 0) & (y <= cap)
        if np.any(mask):
            out[mask] = smoothstep(y[mask] / cap[mask]) - 1.0
    return out if out.ndim else float(out)


def F_abg(x, y, alpha: float, beta: float, gamma: float, a_neg: float = 1.0,
          profile: BumpProfile = DEFAULT_PROFILE):
    """Complex building block f_abg * exp(2 pi i H_{alpha/beta}); |F| = f_abg."""
    mod = f_abg(x, y, alpha, beta, gamma, a_neg)
    phase = H_lambda(x, y, alpha / beta, profile)
    out = mod * np.exp(2j * np.pi * np.asarray(phase))
    return out if np.ndim(out) else complex(out)


def phi_rs(x, r: float, s: float):
    """Three-case continuity gauge in |x|, parameterized by (r, s).

    |x|^{2 - r(3/r + 1/s - 1)} when 3/r + 1/s > 1; x^2 log(1 + 1/|x|) when
    equal to 1 (exact floating comparison); x^2 otherwise. Requires
    1/r + 1/s < 1; returns 0 at x = 0 in every case.
    """
    if r <= 0 or s <= 0 or 1.0 / r + 1.0 / s >= 1.0:
        raise ParameterError("phi_rs needs r, s > 0 with 1/r + 1/s < 1")
    x = np.abs(np.asarray(x, dtype=float))
    t = 3.0 / r + 1.0 / s
    if t > 1.0:
        out = x ** (2.0 - r * (t - 1.0))
    elif t == 1.0:
        out = np.where(x == 0.0, 0.0, x * x * np.log1p(np.divide(
            1.0, x, out=np.ones_like(x), where=x != 0.0)))
    else:
        out = x * x
    return out if out.ndim else float(out)


def taylor_b(n: int, beta: float) -> float:
    """Binomial-series magnitude b_n = beta(beta+1)...(beta+n-1)/n!; b_0 = 1."""
    if n < 0:
        raise ParameterError("n must be >= 0")
    if beta <= 0:
        raise ParameterError("beta must be positive")
    if n == 0:
        return 1.0
    i = np.arange(n, dtype=float)
    return float(np.prod((beta + i) / (i + 1.0)))


def taylor_b_sequence(n_max: int, beta: float) -> np.ndarray:
    """Array [b_0, ..., b_{n_max}] by the exact recurrence b_{n+1}=b_n(beta+n)/(n+1)."""
    if n_max < 0:
        raise ParameterError("n_max must be >= 0")
    if beta <= 0:
        raise ParameterError("beta must be positive")
    i = np.arange(n_max, dtype=float)
    return np.concatenate(([1.0], np.cumprod((beta + i) / (i + 1.0))))
