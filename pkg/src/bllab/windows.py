"""Window constructions: reference windows and the three Zak-side designs.

A WindowSpec declares what to build; derive_params turns the localization
exponents (r, s, q) into the construction parameters (r', s', alpha, beta,
gamma, k, a_neg) deterministically; the three construct_* pipelines fill an
analytic Zak grid and synthesize a time-side window from it.

The three designs share one scheme. A scalar symbol is built on the unit cell
and extended to the plane by the exact quasi-periodicity rules, so the
synthesized window reproduces the analytic grid on re-forward:

- diagonal-branch design (case_a): G = Phi(x-1/2, y-1/2) e^{2 pi i Psi(...)},
  modulus Phi vanishing only on the shifted lattice, phase Psi carrying the
  ramp H_{alpha/beta};
- steep-branch design (case_b): G = Upsilon(x-1/2, y-1/2) with
  Upsilon(x, y) = Theta(x, y) - Theta(-x, y) e^{2 pi i y};
- compactly supported design (compact): the same Upsilon pipeline with a
  y-independent Theta, so the window has exactly two active translates.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from .errors import NyquistError, ParameterError, ParameterRegionError
from .special import (BumpProfile, DEFAULT_PROFILE, H_lambda, bump_rho, f_abg,
                      transition_nu)
from .tradeoff import branch_coefficients, classify
from .zak import SampledWindow, ZakGrid, zak_inverse

__all__ = [
    "WindowSpec",
    "DerivedParams",
    "derive_params",
    "build_psi",
    "build_phi",
    "build_theta",
    "upsilon",
    "zak_symbol",
    "construct_case_a",
    "construct_case_b",
    "construct_compact",
    "gaussian_window",
    "box_window",
    "build",
]

KINDS = ("gaussian", "box", "case_a", "case_b", "compact", "test_fa")


@dataclass(frozen=True)
class WindowSpec:
    """Declarative window recipe: kind plus every construction parameter.

    kind is one of gaussian | box | case_a | case_b | compact | test_fa.
    N is the samples-per-unit resolution and K the half-support in periods
    (2K <= N). The localization exponents r, s and the diagnostic order q
    drive the three constructed kinds; eps optionally pins the interior
    margin that derive_params would otherwise pick; eta sets the cutoff
    half-width; sigma is the Gaussian width; alpha, beta parameterize the
    test_fa coefficient probe (which has no time-side window).
    """

    kind: str
    N: int = 128
    K: int = 8
    q: float | None = None
    r: float | None = None
    s: float | None = None
    eps: float | None = None
    eta: float = 0.1
    sigma: float = 1.0
    alpha: float | None = None
    beta: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ParameterError(f"unknown window kind {self.kind!r}")
        if self.N < 1 or self.K < 1:
            raise ParameterError("N and K must be positive integers")
        if 2 * self.K > self.N:
            raise NyquistError(f"need 2K <= N, got N={self.N}, K={self.K}")
        if not (0.0 < self.eta < 0.25):
            raise ParameterError(f"eta must lie in (0, 1/4), got {self.eta}")
        if self.kind == "gaussian" and self.sigma <= 0:
            raise ParameterError("gaussian width sigma must be positive")
        if self.kind in ("case_a", "case_b"):
            if self.q is None or self.r is None or self.s is None:
                raise ParameterError(f"{self.kind} needs q, r, and s")
        if self.kind == "compact":
            if self.q is None or self.r is None:
                raise ParameterError("compact needs q and r")
        if self.kind == "test_fa":
            if self.alpha is None or self.beta is None:
                raise ParameterError("test_fa needs alpha and beta")

    def to_json(self) -> str:
        """Serialize to JSON; round-trips exactly through from_json."""
        data = {k: v for k, v in self.__dict__.items() if v is not None}
        if self.q == math.inf:
            data["q"] = "inf"
        return json.dumps(data, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "WindowSpec":
        data = json.loads(text)
        if data.get("q") == "inf":
            data["q"] = math.inf
        return cls(**data)


@dataclass(frozen=True)
class DerivedParams:
    """Construction parameters produced by derive_params.

    r_prime, s_prime are the shifted exponents; alpha, beta the modulus
    exponents; k the derivative order the design is smooth to; gamma the
    homogeneity softener (0.9 of its bound); a_neg the negative-side slope
    of the anisotropic modulus (2^{gamma/alpha} for case_b, 1 for case_a,
    None for compact whose negative-side coefficient is exactly 2). The
    compact kind has no s-side data: s_prime, beta, gamma, k, a_neg are None.
    """

    kind: str
    q: float
    r: float
    s: float | None
    eps: float
    r_prime: float
    s_prime: float | None
    alpha: float
    beta: float | None
    gamma: float | None
    k: int | None
    a_neg: float | None

    def as_dict(self) -> dict[str, Any]:
        """Plain-dict view with infinities stringified for JSON reports."""
        out: dict[str, Any] = {}
        for key, val in self.__dict__.items():
            if isinstance(val, float) and math.isinf(val):
                val = "inf"
            out[key] = val
        return out


def _solve_decreasing(f, target: float, hi: float = 1.0) -> float:
    # bisection for f(x) = target with f continuous strictly decreasing,
    # f(0) > target; deterministic, absolute tolerance 1e-14
    lo = 0.0
    while f(hi) > target:
        hi *= 2.0
        if hi > 1e9:
            raise ParameterError("no admissible margin below 1e9")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if hi - lo <= 1e-14:
            break
        if f(mid) > target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _require_above(u: float, v: float, q: float) -> None:
    point = classify(u, v, q)
    if point.classification != "Above":
        raise ParameterRegionError(
            f"(1/r, 1/s) = ({u}, {v}) is {point.classification} the q={q} "
            "trade-off curve; constructions need strictly Above")


def derive_params(spec: WindowSpec) -> DerivedParams:
    """Deterministic construction parameters for a case_a/case_b/compact spec.

    The interior margin eps is the midpoint of its admissible open interval
    (half the maximal admissible margin) unless spec.eps pins it; k is the
    smallest integer exceeding max(r', s')/2; gamma sits at 90% of its bound
    min(alpha/k, beta/k). Equal specs produce bit-identical parameters.

    Raises ParameterRegionError when (1/r, 1/s) is not strictly above the
    q-curve or lands in the other design's subregion, and OutOfSectorError
    when it leaves 0 <= 1/s <= 1/r <= 1.
    """
    if spec.kind not in ("case_a", "case_b", "compact"):
        raise ParameterError(f"derive_params does not apply to {spec.kind!r}")
    q, r = float(spec.q), float(spec.r)
    c, d = branch_coefficients(q)

    if spec.kind == "compact":
        _require_above(1.0 / r, 0.0, q)  # Above at v=0 is exactly r < c
        eps_max = c - r
        eps = 0.5 * eps_max if spec.eps is None else float(spec.eps)
        if not 0.0 < eps < eps_max:
            raise ParameterRegionError(
                f"pinned eps={eps} outside the admissible interval "
                f"(0, {eps_max})")
        r_prime = r + eps
        return DerivedParams(
            kind="compact", q=q, r=r, s=None, eps=eps, r_prime=r_prime,
            s_prime=None, alpha=0.5 * (r_prime - 1.0), beta=None, gamma=None,
            k=None, a_neg=None)

    s = float(spec.s)
    u, v = 1.0 / r, 1.0 / s
    _require_above(u, v, q)

    if spec.kind == "case_a":
        if not u + 3.0 * v > 1.0:
            raise ParameterRegionError(
                "case_a needs 1/r + 3/s > 1 (diagonal subregion); "
                "use case_b for this point")
        if not u + v > d:
            raise ParameterRegionError(
                "case_a needs 1/r + 1/s above the diagonal level "
                f"{d}; the point is above the steep branch only")

        def sum_inv(e: float) -> float:
            return 1.0 / (r + e) + 1.0 / (s + e)

        def sum_inv3(e: float) -> float:
            return 1.0 / (r + e) + 3.0 / (s + e)

        eps_lo = 0.0 if sum_inv(0.0) < 1.0 else _solve_decreasing(sum_inv, 1.0)
        eps_hi = min(_solve_decreasing(sum_inv, d),
                     _solve_decreasing(sum_inv3, 1.0))
    else:
        if not u + 3.0 * v <= 1.0:
            raise ParameterRegionError(
                "case_b needs 1/r + 3/s <= 1 (steep subregion); "
                "use case_a for this point")

        def steep(e: float) -> float:
            return c / (r + e) + 1.0 / (s + e)

        eps_lo = 0.0
        eps_hi = _solve_decreasing(steep, 1.0)

    if spec.eps is None:
        eps = 0.5 * (eps_lo + eps_hi)
    else:
        eps = float(spec.eps)
        if not eps_lo < eps < eps_hi:
            raise ParameterRegionError(
                f"pinned eps={eps} outside the admissible interval "
                f"({eps_lo}, {eps_hi})")

    r_prime, s_prime = r + eps, s + eps
    margin = 1.0 - 1.0 / r_prime - 1.0 / s_prime
    alpha = 0.5 * r_prime * margin
    beta = 0.5 * s_prime * margin
    if not (alpha > 0.0 and beta > 0.0):
        raise ParameterRegionError(
            "derived alpha, beta not strictly positive; no admissible margin")
    k = int(math.floor(max(r_prime, s_prime) / 2.0)) + 1
    gamma = 0.9 * min(alpha / k, beta / k)
    a_neg = 2.0 ** (gamma / alpha) if spec.kind == "case_b" else 1.0
    return DerivedParams(
        kind=spec.kind, q=q, r=r, s=s, eps=eps, r_prime=r_prime,
        s_prime=s_prime, alpha=alpha, beta=beta, gamma=gamma, k=k,
        a_neg=a_neg)


def _psi_base(x, y, params: DerivedParams, profile: BumpProfile):
    # base cell [-1/2,1/2) x [0,1): 0 for x <= 0, else the rho-blend of the
    # phase ramp with the linear sheet y - 1/2
    rho = bump_rho(x, profile)
    ramp = H_lambda(np.maximum(x, 0.0), y, params.alpha / params.beta, profile)
    blended = rho * ramp + (1.0 - rho) * (y - 0.5)
    return np.where(x <= 0.0, 0.0, blended)


def build_psi(x, y, params: DerivedParams,
              profile: BumpProfile = DEFAULT_PROFILE):
    """Phase sheet Psi of the diagonal-branch design, extended to the plane.

    On the base cell [-1/2,1/2) x [0,1): 0 for x <= 0 and
    rho(x) H_{alpha/beta}(x, y) + (1 - rho(x)) (y - 1/2) for x > 0. Extension:
    Psi(x, y + 1) = Psi(x, y), then Psi(x + 1, y) = Psi(x, y) + y - 1/2 with
    y already reduced; the two rules commute modulo integers, so
    e^{2 pi i Psi} is single-valued.
    """
    if params.kind != "case_a":
        raise ParameterError("build_psi expects case_a params")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    y_red = y - np.floor(y)
    sheet = np.floor(x + 0.5)
    x_red = x - sheet
    out = _psi_base(x_red, y_red, params, profile) + sheet * (y_red - 0.5)
    return out if np.ndim(out) else float(out)


def build_phi(x, y, params: DerivedParams,
              profile: BumpProfile = DEFAULT_PROFILE):
    """Modulus sheet Phi of the diagonal-branch design, 1-periodic in x and y.

    Phi = rho(y) [rho(x) (|x|^{alpha/gamma} + |y|^{beta/gamma})^gamma
    + 1 - rho(x)] + 1 - rho(y) on the centered cell. Nonnegative, equal to 1
    on the cell boundary, and zero exactly on the integer lattice.
    """
    if params.kind != "case_a":
        raise ParameterError("build_phi expects case_a params")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    x_red = x - np.floor(x + 0.5)
    y_red = y - np.floor(y + 0.5)
    rx = bump_rho(x_red, profile)
    ry = bump_rho(y_red, profile)
    mod = f_abg(x_red, y_red, params.alpha, params.beta, params.gamma, 1.0)
    out = ry * (rx * mod + 1.0 - rx) + 1.0 - ry
    return out if np.ndim(out) else float(out)


def _theta_base(x, y, params: DerivedParams, profile: BumpProfile):
    # Theta_0 on the centered cell; the compact kind drops the y coordinate
    # and uses the bare exponent alpha with negative-side coefficient 2
    rx = bump_rho(x, profile)
    if params.kind == "case_b":
        hump = f_abg(x, y, params.alpha, params.beta, params.gamma,
                     params.a_neg) + 1.0
    else:
        hump = np.where(np.asarray(x) >= 0.0, 1.0, 2.0) * np.abs(
            x) ** params.alpha + 1.0
    theta0 = rx * hump + (1.0 - rx) * np.where(np.asarray(x) < 0.0, 1.0, 0.0)
    if params.kind == "case_b":
        ry = bump_rho(y, profile)
        return ry * theta0 + (1.0 - ry) * transition_nu(x, profile)
    return theta0 * np.ones_like(np.asarray(y, dtype=float))


def build_theta(x, y, params: DerivedParams,
                profile: BumpProfile = DEFAULT_PROFILE):
    """Real plateau Theta of the steep-branch and compact designs.

    case_b: Theta = rho(y) Theta_0 + (1 - rho(y)) nu(x) with Theta_0 the
    anisotropic hump rho(x)(f_abg + 1) + (1 - rho(x)) 1_{x<0}; equals 1 on
    x <= -2 eta, 0 on x >= 2 eta, and f_abg + 1 on the eta-square. compact:
    the y-independent variant with |x|^alpha humps. Defined on the closed
    centered cell (the x = 1/2 edge evaluates to 0).
    """
    if params.kind not in ("case_b", "compact"):
        raise ParameterError("build_theta expects case_b or compact params")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    out = _theta_base(x, y, params, profile)
    return out if np.ndim(out) else float(out)


def upsilon(x, y, params: DerivedParams,
            profile: BumpProfile = DEFAULT_PROFILE):
    """Zak-side symbol Theta(x,y) - Theta(-x,y) e^{2 pi i y}, fully extended.

    Base cell is the centered unit square; the extension rules are
    Upsilon(x, y + 1) = Upsilon(x, y) and
    Upsilon(x + 1, y) = -e^{2 pi i y} Upsilon(x, y).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    y_red = y - np.floor(y + 0.5)
    sheet = np.floor(x + 0.5)
    x_red = x - sheet
    phase = np.exp(2j * np.pi * y_red)
    base = (build_theta(x_red, y_red, params, profile)
            - build_theta(-x_red, y_red, params, profile) * phase)
    out = (-phase) ** sheet * base
    return out if np.ndim(out) else complex(out)


def zak_symbol(x, y, params: DerivedParams,
               profile: BumpProfile = DEFAULT_PROFILE):
    """Analytic Zak-grid symbol G(x, y) of a constructed design, any (x, y).

    case_a: Phi(x - 1/2, y - 1/2) e^{2 pi i Psi(x - 1/2, y - 1/2)};
    case_b and compact: Upsilon(x - 1/2, y - 1/2). Satisfies the exact
    quasi-periodicity G(x, y + 1) = G(x, y),
    G(x + 1, y) = e^{2 pi i y} G(x, y).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if params.kind == "case_a":
        mod = build_phi(x - 0.5, y - 0.5, params, profile)
        phase = build_psi(x - 0.5, y - 0.5, params, profile)
        out = mod * np.exp(2j * np.pi * phase)
    else:
        out = upsilon(x - 0.5, y - 0.5, params, profile)
    return out if np.ndim(out) else complex(out)


def _synthesize(spec: WindowSpec) -> SampledWindow:
    # fill the analytic grid at N x N, invert at full bandwidth K = N//2,
    # normalize; re-forwarding the result reproduces the analytic grid
    params = derive_params(spec)
    profile = BumpProfile(spec.eta)
    t = np.arange(spec.N, dtype=float) / spec.N
    X, Y = np.meshgrid(t, t, indexing="ij")
    values = np.asarray(zak_symbol(X, Y, params, profile), dtype=complex)
    if not np.all(np.isfinite(values)):
        raise ParameterError("analytic grid contains non-finite values")
    window = zak_inverse(ZakGrid(spec.N, values), spec.N // 2)
    return window.normalized()


def construct_case_a(spec: WindowSpec) -> SampledWindow:
    """Synthesize the diagonal-branch window |G| = Phi, phase Psi.

    The returned window is normalized and carries full bandwidth K = N//2;
    its re-forwarded Zak grid matches the analytic symbol away from the
    single zero at (1/2, 1/2).
    """
    if spec.kind != "case_a":
        raise ParameterError("construct_case_a expects a case_a spec")
    return _synthesize(spec)


def construct_case_b(spec: WindowSpec) -> SampledWindow:
    """Synthesize the steep-branch window from the Upsilon symbol."""
    if spec.kind != "case_b":
        raise ParameterError("construct_case_b expects a case_b spec")
    return _synthesize(spec)


def construct_compact(spec: WindowSpec) -> SampledWindow:
    """Synthesize the compactly supported window (s = infinity design).

    The y-independent Theta makes the symbol a two-term trigonometric
    polynomial in y, so the window occupies exactly the translates on
    [-1, 1) and all mass outside [-2, 2] vanishes.
    """
    if spec.kind != "compact":
        raise ParameterError("construct_compact expects a compact spec")
    return _synthesize(spec)


def gaussian_window(sigma: float, N: int, K: int) -> SampledWindow:
    """Normalized Gaussian c e^{-pi t^2 / sigma^2} sampled on [-K, K).

    At sigma = 1 the peak value is 2^{1/4} (the L2-normalized Gaussian);
    truncation mass outside [-K, K] is below 1e-12 once K >= 6 sigma.
    """
    if sigma <= 0:
        raise ParameterError("sigma must be positive")
    if 2 * K > N:
        raise NyquistError(f"need 2K <= N, got N={N}, K={K}")
    t = -K + np.arange(2 * K * N, dtype=float) / N
    samples = (2.0 ** 0.25 / math.sqrt(sigma)) * np.exp(
        -math.pi * (t / sigma) ** 2)
    return SampledWindow(N, K, samples.astype(complex)).normalized()


def box_window(N: int, K: int) -> SampledWindow:
    """Indicator of [0, 1): exactly unit norm, the canonical Zak test window."""
    if 2 * K > N:
        raise NyquistError(f"need 2K <= N, got N={N}, K={K}")
    samples = np.zeros(2 * K * N, dtype=complex)
    samples[K * N:(K + 1) * N] = 1.0
    return SampledWindow(N, K, samples)


def build(spec: WindowSpec) -> SampledWindow:
    """Construct the window a spec describes (test_fa has none)."""
    if spec.kind == "gaussian":
        return gaussian_window(spec.sigma, spec.N, spec.K)
    if spec.kind == "box":
        return box_window(spec.N, spec.K)
    if spec.kind == "case_a":
        return construct_case_a(spec)
    if spec.kind == "case_b":
        return construct_case_b(spec)
    if spec.kind == "compact":
        return construct_compact(spec)
    raise ParameterError("test_fa is a coefficient probe with no window")
