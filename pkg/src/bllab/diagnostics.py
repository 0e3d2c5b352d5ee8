"""Lattice-system diagnostics, coefficient probes, and the analysis pipeline.

Zak-grid zero location and extrema, the integral-criterion refinement trace
for near-frame behavior, Gram matrices of the integer time-frequency shifts
with their coefficient-norm probes, Fourier coefficients of the singular
weight f_ab with their l^q partial sums, the pointwise continuity-gauge
check, and analyze(), which packs construction, moments, classification,
and probes into one deterministic report.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import logsumexp, roots_jacobi

from .errors import (NumericError, ParameterError, TruncationLossError)
from .localization import (MomentReport, freq_moment, moment_report,
                           time_moment, trace_verdict)
from .special import f_ab, phi_rs, smoothstep
from .tradeoff import TradeoffPoint, classify
from .windows import (DerivedParams, WindowSpec, box_window, build,
                      derive_params, gaussian_window)
from .zak import SampledWindow, ZakGrid, zak_forward

__all__ = [
    "ZeroReport",
    "CqReport",
    "CoeffGrid",
    "CqProbeResult",
    "DiagnosticsReport",
    "zak_min_max",
    "find_zero",
    "cq_integral_trace",
    "lipschitz_bound_check",
    "fourier_coeffs_fab",
    "lq_partial_sums",
    "gram_matrix",
    "cq_constant_probe",
    "analyze",
]

NO_ZERO_THRESHOLD = 0.1
PARTIAL_SUM_DELTA = 0.05


# ---------------------------------------------------------------------------
# result records


@dataclass(frozen=True)
class ZeroReport:
    """Location and depth of the smallest |Zg| value on the grid.

    (x, y) is the grid argmin plus a sub-cell quadratic offset; magnitude is
    the fitted minimum (clamped at 0). no_zero is set when the grid minimum
    never drops below NO_ZERO_THRESHOLD, in which case the location is just
    the argmin of a function with no actual zero.
    """

    x: float
    y: float
    magnitude: float
    no_zero: bool

    def as_dict(self) -> dict:
        return {"x": self.x, "y": self.y, "magnitude": self.magnitude,
                "no_zero": self.no_zero}


@dataclass(frozen=True)
class CqReport:
    """Refinement evidence for the q-th lattice-system criterion.

    integral_trace holds (N, value) pairs for the grid average of
    |Zg|^(-2q/(q-2)); gram_ratio_trace holds (M, ratio) pairs from the
    coefficient-norm probe (filled by analyze; empty when only the integral
    side was run); verdict classifies the integral trace by the shared
    divergence rule.
    """

    q: float
    integral_trace: tuple
    gram_ratio_trace: tuple
    verdict: str

    def __post_init__(self) -> None:
        if len(self.integral_trace) == 0:
            raise ParameterError("integral_trace must be nonempty")

    def as_dict(self) -> dict:
        return {
            "q": _json_float(self.q),
            "integral_trace": [[int(n), _json_float(v)]
                               for n, v in self.integral_trace],
            "gram_ratio_trace": [[int(m), _json_float(v)]
                                 for m, v in self.gram_ratio_trace],
            "verdict": self.verdict,
        }


@dataclass(frozen=True)
class CoeffGrid:
    """Fourier coefficients of f_ab (or its real part) on |m|, |n| <= M.

    coeffs[m + M, n + M] approximates the (m, n) coefficient from a
    fine_N x fine_N rectangle rule with the singular cell block replaced by
    exact-weight polar quadrature; err_estimate is the largest normalized
    per-coefficient deviation against a run at twice the resolution.
    """

    alpha: float
    beta: float
    M: int
    fine_N: int
    part: str
    coeffs: np.ndarray = field(repr=False)
    err_estimate: float = 0.0

    def __post_init__(self) -> None:
        side = 2 * self.M + 1
        if self.coeffs.shape != (side, side):
            raise ParameterError("coeffs must be (2M+1) x (2M+1)")

    def at(self, m: int, n: int) -> complex:
        """Coefficient for the pair (m, n), |m|, |n| <= M."""
        if abs(m) > self.M or abs(n) > self.M:
            raise ParameterError(f"|m|, |n| must be <= M = {self.M}")
        return complex(self.coeffs[m + self.M, n + self.M])


@dataclass(frozen=True)
class CqProbeResult:
    """Coefficient-norm probe of a Gram matrix.

    ratio is the largest l^q-to-energy quotient found over all candidate
    vectors; levels holds the running maximum per nested block size M' so the
    trace is nondecreasing by construction; q2_exact is 1/sqrt(lambda_min);
    not_cq is set when a candidate hit the numerical kernel of the Gram.
    """

    ratio: float
    q2_exact: float
    not_cq: bool
    levels: tuple


@dataclass(frozen=True)
class DiagnosticsReport:
    """Everything analyze() measures for one spec, JSON-serializable."""

    schema: str
    spec: WindowSpec
    r: float
    s: float
    q: float
    classification: TradeoffPoint
    params: DerivedParams | None
    moment: MomentReport
    time_verdict: str
    freq_verdict: str
    zak_min: float
    zak_max: float
    zero: ZeroReport
    cq: CqReport | None
    lipschitz: float | None

    def to_json(self) -> str:
        data = {
            "schema": self.schema,
            "spec": json.loads(self.spec.to_json()),
            "r": self.r,
            "s": _json_float(self.s),
            "q": _json_float(self.q),
            "classification": {
                "u": self.classification.u,
                "v": self.classification.v,
                "q": _json_float(self.classification.q),
                "label": self.classification.classification,
            },
            "params": self.params.as_dict() if self.params else None,
            "moment": json.loads(self.moment.to_json()),
            "time_verdict": self.time_verdict,
            "freq_verdict": self.freq_verdict,
            "zak_min": self.zak_min,
            "zak_max": self.zak_max,
            "zero": self.zero.as_dict(),
            "cq": self.cq.as_dict() if self.cq else None,
            "lipschitz": self.lipschitz,
        }
        return json.dumps(data, sort_keys=True, allow_nan=False)


def _json_float(v: float):
    v = float(v)
    return v if math.isfinite(v) else str(v)


# ---------------------------------------------------------------------------
# Zak-grid probes


def zak_min_max(G: ZakGrid) -> tuple[float, float]:
    """(min, max) of |Zg| over the grid.

    max^2 is the Bessel-bound proxy; min > 0 is the completeness proxy.
    """
    a = np.abs(G.values)
    return float(a.min()), float(a.max())


def find_zero(G: ZakGrid) -> ZeroReport:
    """Deepest |Zg| minimum: grid argmin plus quadratic sub-cell refinement.

    |Zg| is 1-periodic in both grid directions, so the 3x3 fit stencil wraps.
    An exact grid zero is returned as-is; otherwise the least-squares
    quadratic over the stencil supplies a sub-cell offset (kept only when the
    fitted Hessian is positive definite and the offset stays within one
    cell). no_zero is set when the grid minimum is >= 0.1.
    """
    N = G.N
    vals = np.abs(G.values)
    flat = int(np.argmin(vals))
    j0, l0 = flat // N, flat % N
    m0 = float(vals[j0, l0])
    no_zero = m0 >= NO_ZERO_THRESHOLD
    if m0 == 0.0:
        return ZeroReport(j0 / N, l0 / N, 0.0, no_zero)
    offs = (-1, 0, 1)
    rows = []
    rhs = []
    for di in offs:
        for dj in offs:
            rows.append([1.0, di, dj, di * di, dj * dj, di * dj])
            rhs.append(vals[(j0 + di) % N, (l0 + dj) % N])
    c, *_ = np.linalg.lstsq(np.array(rows), np.array(rhs), rcond=None)
    hess = np.array([[2.0 * c[3], c[5]], [c[5], 2.0 * c[4]]])
    dx = dy = 0.0
    if hess[0, 0] > 0.0 and np.linalg.det(hess) > 0.0:
        step = np.linalg.solve(hess, -c[1:3])
        if np.max(np.abs(step)) <= 1.0:
            dx, dy = float(step[0]), float(step[1])
    fit = c[0] + c[1] * dx + c[2] * dy + c[3] * dx * dx + c[4] * dy * dy \
        + c[5] * dx * dy
    return ZeroReport(((j0 + dx) / N) % 1.0, ((l0 + dy) / N) % 1.0,
                      max(float(fit), 0.0), no_zero)


def _decimate(w: SampledWindow, N: int) -> SampledWindow:
    if w.N % N != 0:
        raise ParameterError(f"{N} does not divide the stored rate {w.N}")
    if N < 2 * w.K:
        raise ParameterError(f"need N >= 2K = {2 * w.K} to decimate")
    return SampledWindow(N, w.K, w.samples[:: w.N // N])


def _spec_at(spec: WindowSpec, N: int) -> WindowSpec:
    return replace(spec, N=N, K=min(spec.K, N // 2))


def cq_integral_trace(source, q: float, N_list: Sequence[int]) -> CqReport:
    """Refinement trace of the grid average of |Zg|^(-2q/(q-2)).

    source is a WindowSpec (rebuilt at each N), a single SampledWindow
    (decimated to each N, which must divide its rate and respect 2K <= N),
    or a sequence of windows matching N_list. Grid cells where |Zg| is
    zero up to roundoff (below 1e-12 of the grid maximum; an analytic zero
    survives the synthesis round trip only at machine-epsilon level) are
    excluded from the average; more than 4 such cells raise NumericError. A
    convergent trace is numerical evidence for the integrability criterion
    behind near-frame behavior at the given q.
    """
    if not q > 2.0:
        raise ParameterError(f"need q > 2, got {q}")
    if len(N_list) == 0:
        raise ParameterError("N_list must be nonempty")
    p = 2.0 if math.isinf(q) else 2.0 * q / (q - 2.0)
    if isinstance(source, WindowSpec):
        windows = [build(_spec_at(source, N)) for N in N_list]
    elif isinstance(source, SampledWindow):
        windows = [_decimate(source, N) for N in N_list]
    else:
        windows = list(source)
        if len(windows) != len(N_list) or any(
                w.N != N for w, N in zip(windows, N_list)):
            raise ParameterError("windows must match N_list")
    values = []
    for w in windows:
        a = np.abs(zak_forward(w).values)
        zero = a <= 1e-12 * float(a.max(initial=0.0))
        excluded = int(np.sum(zero))
        if excluded > 4:
            raise NumericError(
                f"|Zg| vanishes on {excluded} cells (more than 4)")
        logs = np.log(a[~zero])
        logmean = float(logsumexp(-p * logs)) - math.log(a.size - excluded)
        values.append(float(np.exp(logmean)))
    return CqReport(q=q, integral_trace=tuple(zip((int(N) for N in N_list),
                                                  values)),
                    gram_ratio_trace=(), verdict=trace_verdict(values))


def lipschitz_bound_check(G: ZakGrid, r: float, s: float, a: float,
                          b: float) -> float:
    """Largest ratio |Zg(x,y) - Zg(a,b)|^2 / (phi_rs(x-a) + phi_sr(y-b)).

    (a, b) is snapped to the nearest grid node; the ball of radius 2/N
    around it is excluded (the gauge vanishes there and discretization noise
    dominates). For a window with finite (r, s) moments the value is a
    refinement-stable surrogate for the continuity constant at the zero.
    Requires 1/r + 1/s < 1.
    """
    N = G.N
    j0, l0 = int(round(a * N)) % N, int(round(b * N)) % N
    center = G.values[j0, l0]
    dx = np.arange(N) / N - j0 / N
    dy = np.arange(N) / N - l0 / N
    num = np.abs(G.values - center) ** 2
    den = np.asarray(phi_rs(dx, r, s))[:, None] + \
        np.asarray(phi_rs(dy, s, r))[None, :]
    mask = (dx ** 2)[:, None] + (dy ** 2)[None, :] > (2.0 / N) ** 2
    return float(np.max(num[mask] / den[mask]))


# ---------------------------------------------------------------------------
# Fourier coefficients of f_ab and their partial sums


def _chi(t, w: float):
    # C-infinity band window in the x-deviation: 1 for |t| <= w/2, 0 for
    # |t| >= w; its Fourier tail decays faster than any power, so removing
    # f*chi from the grid part leaves a spectrally convergent FFT sum
    return smoothstep(2.0 * (w - np.abs(np.asarray(t, dtype=float))) / w)


def _band_width(fN: int) -> float:
    # half-width of the corrected band: fixed physically, but never fewer
    # than 16 grid cells so the window itself stays resolved
    return min(0.25, max(3.0 / 32.0, 16.0 / fN))


def _grid_part(alpha: float, beta: float, M: int, fN: int, part: str,
               w: float) -> np.ndarray:
    # corner-rule FFT of f*(1-chi): the weight vanishes on the singular
    # band, so no sample touches the cusp line or the singular point
    xs = np.arange(fN) / fN
    weight = 1.0 - _chi(xs - 0.5, w)
    vals = np.zeros((fN, fN), dtype=complex)
    sel = weight > 0.0
    cols = f_ab(xs[sel, None], xs[None, :], alpha, beta)
    if part == "real":
        cols = cols.real.astype(complex)
    vals[sel] = weight[sel, None] * cols
    F = np.fft.fft2(vals) / fN ** 2
    ms = np.arange(-M, M + 1)
    return F[np.ix_(ms % fN, ms % fN)]


def _block_nodes(alpha: float, beta: float, w: float, part: str,
                 n_ang: int, n_rad: int):
    # polar-quadrature nodes for the square block |x-1/2|, |y-1/2| <= w:
    # per quadrant, tau = |x-1/2|^alpha and u = |y-1/2| are mapped to
    # (rho, theta); the radial weight rho^(1/alpha - beta) and the angular
    # weight cos(theta)^(1/alpha - 1) are exact Gauss-Jacobi weights, and
    # the remaining factor zeta^(-beta) (with f = rho^(-beta) zeta^(-beta))
    # is smooth up to the singular point. The chi band window is applied
    # at the nodes so block + strips + FFT part compose exactly.
    lam = 1.0 / alpha
    theta_c = math.atan(w ** (1.0 - alpha))
    xg, wg = leggauss(n_ang)
    th_a = theta_c * (xg + 1.0) / 2.0
    wth_a = wg * (theta_c / 2.0) * np.cos(th_a) ** (lam - 1.0)
    r_a = w ** alpha / np.cos(th_a)
    sig_c = math.cos(theta_c)
    xj, wj = roots_jacobi(n_ang, 0.0, lam - 1.0)
    sig = sig_c * (xj + 1.0) / 2.0
    th_b = np.arccos(sig)
    wth_b = wj * (sig_c / 2.0) ** lam / np.sqrt(1.0 - sig ** 2)
    r_b = w / np.sin(th_b)
    theta = np.concatenate([th_a, th_b])
    wth = np.concatenate([wth_a, wth_b])
    rad = np.concatenate([r_a, r_b])
    xr, wr = roots_jacobi(n_rad, 0.0, lam - beta)
    rho = rad[:, None] * (xr[None, :] + 1.0) / 2.0
    wrho = wr[None, :] * (rad[:, None] / 2.0) ** (lam - beta + 1.0)
    tmag = (rho * np.cos(theta)[:, None]).ravel() ** lam
    weight = (wth[:, None] * wrho / alpha).ravel() * _chi(tmag, w)
    umag = (rho * np.sin(theta)[:, None]).ravel()
    rho = rho.ravel()
    cos_t = np.repeat(np.cos(theta), n_rad)
    xs, ys, ws, fs = [], [], [], []
    for qt in (1.0, -1.0):
        for qv in (1.0, -1.0):
            arg = 2j * np.pi * qv * umag
            zeta = cos_t * np.exp(arg) - np.expm1(arg) / rho
            fval = np.exp(-beta * np.log(zeta))
            if part == "real":
                fval = fval.real.astype(complex)
            xs.append(0.5 + qt * tmag)
            ys.append(0.5 + qv * umag)
            ws.append(weight)
            fs.append(fval)
    return (np.concatenate(xs), np.concatenate(ys), np.concatenate(ws),
            np.concatenate(fs))


def _strip_nodes(alpha: float, beta: float, w: float, part: str, M: int):
    # the chi-weighted band outside the block: |x-1/2| <= w, w < |y-1/2|.
    # x-side: u = |x-1/2|^alpha Gauss-Jacobi (weight u^{1/alpha-1}); y-side:
    # dyadically graded Gauss-Legendre panels away from the block edge.
    # f is smooth on the strips, so fixed node counts scaled by the phase
    # cycle count M*w (x) and M*panel (y) converge to machine accuracy.
    lam = 1.0 / alpha
    n_x = max(32, int(3.0 * M * w) + 24)
    xj, wj = roots_jacobi(n_x, 0.0, lam - 1.0)
    u = (xj + 1.0) / 2.0 * w ** alpha
    wu = wj * (w ** alpha / 2.0) ** lam / alpha
    t = u ** lam
    wu = wu * _chi(t, w)
    edges = [w]
    while edges[-1] < 0.5:
        edges.append(min(2.0 * edges[-1], 0.5))
    ys, wy = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        npan = max(24, int(3.0 * M * (hi - lo)) + 16)
        xg, wg = leggauss(npan)
        v = lo + (hi - lo) * (xg + 1.0) / 2.0
        pw = wg * (hi - lo) / 2.0
        ys.extend([0.5 + v, 0.5 - v])
        wy.extend([pw, pw])
    yv = np.concatenate(ys)
    wyv = np.concatenate(wy)
    xs_all, ws_all, fs_all = [], [], []
    for qt in (1.0, -1.0):
        xv = 0.5 + qt * t
        fv = f_ab(xv[:, None], yv[None, :], alpha, beta)
        if part == "real":
            fv = fv.real.astype(complex)
        xs_all.append(xv)
        ws_all.append(wu)
        fs_all.append(fv)
    return xs_all, ws_all, yv, wyv, fs_all


def _coeffs_at(alpha: float, beta: float, M: int, fN: int,
               part: str) -> np.ndarray:
    w = _band_width(fN)
    base = _grid_part(alpha, beta, M, fN, part, w)
    ms = np.arange(-M, M + 1)
    n_blk = max(48, int(3.5 * M * w) + 32)
    bx, by, bw, bf = _block_nodes(alpha, beta, w, part, n_blk, n_blk)
    gx = np.exp(-2j * np.pi * ms[:, None] * bx[None, :])
    gy = np.exp(-2j * np.pi * ms[:, None] * by[None, :])
    block = (gx * (bw * bf)[None, :]) @ gy.T
    xs_all, ws_all, yv, wyv, fs_all = _strip_nodes(alpha, beta, w, part, M)
    py = np.exp(-2j * np.pi * ms[:, None] * yv[None, :])
    strip = np.zeros_like(block)
    for xv, wu, fv in zip(xs_all, ws_all, fs_all):
        px = np.exp(-2j * np.pi * ms[:, None] * xv[None, :])
        strip += (px * wu[None, :]) @ (fv * wyv[None, :]) @ py.T
    return base + block + strip


def fourier_coeffs_fab(alpha: float, beta: float, M: int, fine_N: int,
                       part: str = "full") -> CoeffGrid:
    """Fourier coefficients of f_ab on |m|, |n| <= M.

    Rectangle-rule FFT on a fine_N^2 corner-sampled grid, with the 3x3 cell
    block around the singular point replaced by polar Gauss-Jacobi
    quadrature that carries the exact phase per (m, n). part = "real"
    computes the coefficients of Re(f_ab) instead (the real-valued check
    variant with conjugate symmetry). The err_estimate field reports the
    largest normalized coefficient deviation against a 2*fine_N run.
    Requires beta < 1 + 1/alpha (integrability) and even fine_N >= 8M.
    """
    if part not in ("full", "real"):
        raise ParameterError("part must be 'full' or 'real'")
    if alpha <= 0 or beta <= 0:
        raise ParameterError("alpha and beta must be positive")
    if beta >= 1.0 + 1.0 / alpha:
        raise ParameterError(
            f"need beta < 1 + 1/alpha = {1.0 + 1.0 / alpha} for f_ab in L^1")
    if M < 1:
        raise ParameterError("M must be >= 1")
    if fine_N < 8 * M or fine_N % 2:
        raise ParameterError("fine_N must be even and >= 8M")
    c1 = _coeffs_at(alpha, beta, M, fine_N, part)
    c2 = _coeffs_at(alpha, beta, M, 2 * fine_N, part)
    floor = 1e-3 * float(np.max(np.abs(c2)))
    dev = np.abs(c2 - c1) / np.maximum(np.abs(c2), floor)
    return CoeffGrid(alpha=alpha, beta=beta, M=M, fine_N=fine_N, part=part,
                     coeffs=c1, err_estimate=float(np.max(dev)))


def lq_partial_sums(coeffs: CoeffGrid, q: float,
                    M_list: Sequence[int]) -> tuple[list, str]:
    """Partial sums S(M) = sum_{|m|,|n|<=M} |coeff|^q and their verdict.

    q = inf is the max norm. The verdict uses the partial-sum rule with
    delta = 5%: Divergent when every successive ratio exceeds 1 + delta,
    Convergent when the final increment is <= delta, else Inconclusive
    (growth of a convergent-exponent tail sum falls below delta well before
    the divergence rule's 1.3 threshold would trigger, so the shared
    doubling rule is deliberately not used here).
    """
    if not q > 2.0:
        raise ParameterError(f"need q > 2, got {q}")
    if len(M_list) == 0:
        raise ParameterError("M_list must be nonempty")
    if any(m < 0 or m > coeffs.M for m in M_list):
        raise ParameterError(f"M_list entries must lie in [0, {coeffs.M}]")
    if list(M_list) != sorted(set(int(m) for m in M_list)):
        raise ParameterError("M_list must be strictly increasing")
    a = np.abs(coeffs.coeffs)
    c = coeffs.M
    sums = []
    for m in M_list:
        block = a[c - m:c + m + 1, c - m:c + m + 1]
        if math.isinf(q):
            sums.append(float(np.max(block)))
        else:
            sums.append(float(np.sum(block ** q)))
    trace = [(int(m), s) for m, s in zip(M_list, sums)]
    if len(sums) < 2:
        return trace, "Inconclusive"
    ratios = [b / a_ for a_, b in zip(sums[:-1], sums[1:])]
    if all(rr > 1.0 + PARTIAL_SUM_DELTA for rr in ratios):
        return trace, "Divergent"
    if ratios[-1] - 1.0 <= PARTIAL_SUM_DELTA:
        return trace, "Convergent"
    return trace, "Inconclusive"


# ---------------------------------------------------------------------------
# Gram matrix of the integer lattice atoms and the coefficient-norm probe


def _zero_shift(samples: np.ndarray, q: int) -> np.ndarray:
    out = np.zeros_like(samples)
    if q == 0:
        out[:] = samples
    elif q > 0:
        out[:-q] = samples[q:]
    else:
        out[-q:] = samples[:q]
    return out


def gram_matrix(w: SampledWindow, M: int) -> np.ndarray:
    """Gram matrix of the atoms e^{2 pi i m t} g(t - n), |m|, |n| <= M.

    Entries are grid inner products; the (m, n) atom sits at column
    (m + M)(2M + 1) + (n + M). Hermitian and positive semidefinite by
    construction. Requires M < K/2 so the truncation the translates suffer
    at the support edge stays a small perturbation of the spectrum.
    """
    if M < 1:
        raise ParameterError("M must be >= 1")
    if 2 * M >= w.K:
        raise TruncationLossError(
            f"need M < K/2 = {w.K / 2} to keep translate truncation small")
    N, L = w.N, len(w.samples)
    side = 2 * M + 1
    j = np.arange(L)
    atoms = np.empty((L, side * side), dtype=complex)
    for n in range(-M, M + 1):
        shifted = _zero_shift(w.samples, -n * N)
        for m in range(-M, M + 1):
            mod = np.exp(2j * np.pi * ((m * j) % N) / N)
            atoms[:, (m + M) * side + (n + M)] = mod * shifted
    gram = atoms.conj().T @ atoms / N
    return (gram + gram.conj().T) / 2.0


def _canonical_pairs(M: int) -> list[tuple[int, int]]:
    # level-major order: all pairs with max(|m|,|n|) = 0, then 1, ... so a
    # prefix of the list is exactly the square block of each smaller level
    pairs = [(m, n) for m in range(-M, M + 1) for n in range(-M, M + 1)]
    pairs.sort(key=lambda p: (max(abs(p[0]), abs(p[1])), p[0], p[1]))
    return pairs


def _norm_q(a: np.ndarray, q: float) -> float:
    if math.isinf(q):
        return float(np.max(np.abs(a)))
    return float(np.sum(np.abs(a) ** q) ** (1.0 / q))


def cq_constant_probe(gram: np.ndarray, q: float, trials: int = 256,
                      seed: int = 0, boost: int = 10) -> CqProbeResult:
    """Largest found ratio ||a||_q / sqrt(a* Gram a) over candidate vectors.

    Candidates per nested block level M' (powers of two up to M): `trials`
    complex-Gaussian vectors drawn in a level-major pair order so the same
    seed reproduces them as prefixes at every level, the three smallest
    eigenvectors, and `boost` fixed-point improvement iterates
    a <- Gram^+ (|a|^{q-2} a) started from the best of those. The per-level
    trace keeps running maxima, so it is nondecreasing in M' by
    construction, and probes of nested Gram matrices with the same seed
    agree on shared levels. q2_exact is 1/sqrt(lambda_min) of the full
    matrix; candidates that hit the numerical kernel set not_cq and an
    infinite ratio.
    """
    if q < 2.0:
        raise ParameterError(f"need q >= 2, got {q}")
    if trials < 1 or boost < 0:
        raise ParameterError("need trials >= 1 and boost >= 0")
    D = gram.shape[0]
    if gram.shape != (D, D):
        raise ParameterError("gram must be square")
    side = int(round(math.sqrt(D)))
    if side * side != D or side % 2 == 0:
        raise ParameterError("gram size must be an odd square (2M+1)^2")
    M = (side - 1) // 2
    levels = sorted({1 << k for k in range(M.bit_length())
                     if (1 << k) <= M} | {M})
    pairs = _canonical_pairs(M)
    col = {p: (p[0] + M) * side + (p[1] + M) for p in pairs}
    order = np.array([col[p] for p in pairs])
    rng_draws = [np.random.default_rng(np.random.SeedSequence([seed, i]))
                 .standard_normal((D, 2)) for i in range(trials)]
    lam_full, _ = np.linalg.eigh(gram)
    lam_max = float(lam_full[-1])
    lam_min = float(lam_full[0])
    not_cq = lam_min <= 1e-14 * lam_max
    q2_exact = math.inf if not_cq else 1.0 / math.sqrt(lam_min)
    kernel_floor = 1e-24 * lam_max

    def ratio(a: np.ndarray, sub: np.ndarray) -> float:
        energy = float(np.real(a.conj() @ sub @ a))
        n2 = float(np.real(a.conj() @ a))
        if energy <= kernel_floor * n2:
            return math.inf
        return _norm_q(a, q) / math.sqrt(energy)

    best = 0.0
    trace = []
    hit_kernel = False
    for Mp in levels:
        Dp = (2 * Mp + 1) ** 2
        idx = order[:Dp]
        sub = gram[np.ix_(idx, idx)]
        lam, vec = np.linalg.eigh(sub)
        cands = [draw[:Dp, 0] + 1j * draw[:Dp, 1] for draw in rng_draws]
        cands.extend(vec[:, k] for k in range(min(3, Dp)))
        ratios = [ratio(a, sub) for a in cands]
        top = int(np.argmax(ratios))
        level_best = ratios[top]
        if boost and math.isfinite(level_best) and not math.isinf(q):
            clamped = np.maximum(lam, 1e-12 * max(lam[-1], 1e-300))
            a = cands[top] / np.linalg.norm(cands[top])
            for _ in range(boost):
                b = np.abs(a) ** (q - 2.0) * a
                a_new = vec @ ((vec.conj().T @ b) / clamped)
                nrm = np.linalg.norm(a_new)
                if nrm == 0.0:
                    break
                a_new /= nrm
                r_new = ratio(a_new, sub)
                if r_new > level_best:
                    level_best, a = r_new, a_new
                else:
                    break
        if math.isinf(level_best):
            hit_kernel = True
        best = max(best, level_best)
        trace.append((Mp, best))
    return CqProbeResult(ratio=best, q2_exact=q2_exact,
                         not_cq=not_cq or hit_kernel, levels=tuple(trace))


# ---------------------------------------------------------------------------
# pipeline


def _window_at(spec: WindowSpec, N: int) -> SampledWindow:
    return build(_spec_at(spec, N))


def analyze(spec: WindowSpec, r: float, s: float, q: float,
            N_list: Sequence[int] = (64, 128, 256), q_test: float | None = None,
            seed: int = 0, window: SampledWindow | None = None,
            probe_M: int = 4, trials: int = 256) -> DiagnosticsReport:
    """Full deterministic pipeline: construction, moments, Zak probes.

    Builds the spec's window at every N in N_list (ascending), computes the
    (r, s) moment report and verdicts, the Zak extrema, the zero location,
    the integral-criterion trace at q_test (default q + 1), the Gram probe
    trace up to probe_M atoms per side at the finest N (probe_M is clamped
    to (K-1)//2 of the finest window; the probe is skipped when that is
    zero), and the continuity gauge at the zero when 1/r + 1/s < 1. A
    prebuilt `window` whose rate
    equals the finest N substitutes for the finest rebuild (the round-trip
    check of the file-based workflow). Pure given (spec, seed).
    """
    if len(N_list) == 0:
        raise ParameterError("N_list must be nonempty")
    N_list = [int(N) for N in N_list]
    if N_list != sorted(set(N_list)):
        raise ParameterError("N_list must be strictly increasing")
    point = classify(1.0 / r, 0.0 if math.isinf(s) else 1.0 / s, q)
    params = derive_params(spec) if spec.kind in ("case_a", "case_b",
                                                  "compact") else None
    if q_test is None:
        q_test = q + 1.0
    windows = [_window_at(spec, N) for N in N_list[:-1]]
    if window is not None:
        if window.N != N_list[-1]:
            raise ParameterError(
                f"window rate {window.N} must equal the finest N "
                f"{N_list[-1]}")
        windows.append(window)
    else:
        windows.append(_window_at(spec, N_list[-1]))
    moment = moment_report(windows, r, s)
    time_verdict = trace_verdict([v for _, _, v in moment.time_trace])
    freq_verdict = trace_verdict([v for _, _, v in moment.freq_trace])
    finest = windows[-1]
    G = zak_forward(finest)
    zmin, zmax = zak_min_max(G)
    zero = find_zero(G)
    core = [moment.time_moment, moment.freq_moment, zmin, zmax,
            zero.magnitude]
    if not all(math.isfinite(v) for v in core):
        raise NumericError("non-finite value in moments or Zak extrema")
    cq = cq_integral_trace(windows, q_test, N_list)
    probe_M = min(probe_M, (finest.K - 1) // 2)
    if probe_M >= 1:
        probe = cq_constant_probe(gram_matrix(finest, probe_M), q_test,
                                  trials=trials, seed=seed)
        cq = CqReport(q=cq.q, integral_trace=cq.integral_trace,
                      gram_ratio_trace=probe.levels, verdict=cq.verdict)
    lips = None
    if not math.isinf(s) and 1.0 / r + 1.0 / s < 1.0:
        lips = lipschitz_bound_check(G, r, s, zero.x, zero.y)
        if not math.isfinite(lips):
            raise NumericError("non-finite continuity-gauge value")
    return DiagnosticsReport(
        schema="bllab.diagnostics/1", spec=spec, r=float(r), s=float(s),
        q=float(q), classification=point, params=params, moment=moment,
        time_verdict=time_verdict, freq_verdict=freq_verdict, zak_min=zmin,
        zak_max=zmax, zero=zero, cq=cq, lipschitz=lips)
