"""Tests for the trade-off geometry and the window constructions."""

from __future__ import annotations

import math

import numpy as np
import pytest
from scipy.optimize import brentq

from bllab.errors import (NyquistError, OutOfSectorError, ParameterError,
                          ParameterRegionError)
from bllab.special import BumpProfile, f_abg
from bllab.tradeoff import branch_coefficients, classify, curve_u_range, gamma_q
from bllab.windows import (WindowSpec, box_window, build, build_phi,
                           build_psi, build_theta, construct_case_a,
                           construct_case_b, construct_compact, derive_params,
                           gaussian_window, upsilon, zak_symbol)
from bllab.zak import ZakGrid, zak_forward, zak_inverse

QS = (2.0, 3.0, 4.0, 10.0, math.inf)


class TestTradeoff:
    def test_branch_coefficients(self):
        assert branch_coefficients(2.0) == (1.0, 1.0)
        assert branch_coefficients(4.0) == (10.0 / 6.0, 2.0 / 3.0)
        assert branch_coefficients(math.inf) == (3.0, 0.5)
        with pytest.raises(ParameterError):
            branch_coefficients(1.5)

    def test_symmetric_anchor_on_curve(self):
        # the symmetric point u = v = q/(4(q-1)) starts the curve for every q
        for q in QS:
            _, d = branch_coefficients(q)
            u = d / 2.0
            assert classify(u, u, q).classification == "On"
            assert abs(gamma_q(u, q) - u) <= 1e-12

    def test_named_anchor_points(self):
        assert classify(0.5, 0.5, 2.0).classification == "On"
        assert classify(0.25, 0.25, math.inf).classification == "On"

    def test_gamma_q_branches(self):
        # q=4: corner at u = 0.5; diagonal branch left of it, steep right
        assert abs(gamma_q(0.4, 4.0) - (2.0 / 3.0 - 0.4)) <= 1e-15
        assert abs(gamma_q(0.55, 4.0) - (1.0 - (10.0 / 6.0) * 0.55)) <= 1e-15
        assert abs(gamma_q(0.5, 4.0) - 1.0 / 6.0) <= 1e-15
        assert abs(gamma_q(0.6, 4.0)) <= 1e-15

    def test_gamma_q_out_of_sector(self):
        lo, hi = curve_u_range(4.0)
        for u in (lo - 1e-6, hi + 1e-6, -0.1, 1.1):
            with pytest.raises(OutOfSectorError):
                gamma_q(u, 4.0)

    def test_classify_regions(self):
        assert classify(0.45, 0.4, 4.0).classification == "Above"
        assert classify(0.45, 0.1, 4.0).classification == "Below"
        # v = 0 is Above exactly when u > 1/c
        c, _ = branch_coefficients(4.0)
        assert classify(1.0 / c + 1e-3, 0.0, 4.0).classification == "Above"
        assert classify(1.0 / c - 1e-3, 0.0, 4.0).classification == "Below"
        with pytest.raises(OutOfSectorError):
            classify(0.3, 0.4, 4.0)
        with pytest.raises(OutOfSectorError):
            classify(1.2, 0.1, 4.0)

    def test_classify_matches_gamma_q(self):
        rng = np.random.default_rng(7)
        for q in (3.0, 4.0, 10.0):
            lo, hi = curve_u_range(q)
            for u in rng.uniform(lo, hi, size=8):
                v = gamma_q(float(u), q)
                assert classify(float(u), v, q).classification == "On"


class TestWindowSpec:
    def test_validation(self):
        with pytest.raises(ParameterError):
            WindowSpec(kind="mystery")
        with pytest.raises(NyquistError):
            WindowSpec(kind="box", N=8, K=8)
        with pytest.raises(ParameterError):
            WindowSpec(kind="case_a", q=4.0, r=2.5)  # s missing
        with pytest.raises(ParameterError):
            WindowSpec(kind="compact", r=1.5)  # q missing
        with pytest.raises(ParameterError):
            WindowSpec(kind="test_fa")
        with pytest.raises(ParameterError):
            WindowSpec(kind="box", eta=0.3)
        with pytest.raises(ParameterError):
            WindowSpec(kind="gaussian", sigma=0.0)

    def test_json_round_trip(self):
        specs = [
            WindowSpec(kind="gaussian", N=64, K=8, sigma=1.5),
            WindowSpec(kind="box", N=32, K=4),
            WindowSpec(kind="case_a", q=4.0, r=2.5, s=2.5, N=128, K=8),
            WindowSpec(kind="case_b", q=4.0, r=1.5, s=20.0, eps=0.1),
            WindowSpec(kind="compact", q=math.inf, r=1.5, eta=0.05),
            WindowSpec(kind="test_fa", alpha=0.5, beta=2.25),
        ]
        for spec in specs:
            assert WindowSpec.from_json(spec.to_json()) == spec

    def test_build_dispatch(self):
        assert build(WindowSpec(kind="box", N=16, K=2)).N == 16
        assert build(WindowSpec(kind="gaussian", N=32, K=6)).K == 6
        with pytest.raises(ParameterError):
            build(WindowSpec(kind="test_fa", alpha=0.5, beta=2.0))


class TestDeriveParams:
    def test_case_a_worked_example(self):
        # q=4, r=s=2.5: margins eps_hi = min(0.5, 1.5), eps_lo = 0, eps = 0.25
        p = derive_params(WindowSpec(kind="case_a", q=4.0, r=2.5, s=2.5))
        assert abs(p.eps - 0.25) <= 1e-12
        assert abs(p.r_prime - 2.75) <= 1e-12
        assert abs(p.alpha - 0.375) <= 1e-12
        assert abs(p.beta - 0.375) <= 1e-12
        assert p.k == 2
        assert abs(p.gamma - 0.16875) <= 1e-12
        assert p.a_neg == 1.0

    def test_case_a_limit_formula(self):
        # at eps -> 0 the exponents tend to (r/2)(1 - 1/r - 1/s) = 0.25
        assert abs(1.25 * (1.0 - 0.8) - 0.25) <= 1e-15

    def test_case_a_forced_lower_margin(self):
        # r = s = 1.8 has 1/r + 1/s > 1, so eps_lo = 0.2; interval (0.2, 1.2)
        p = derive_params(WindowSpec(kind="case_a", q=4.0, r=1.8, s=1.8))
        assert abs(p.eps - 0.7) <= 1e-12
        assert abs(p.r_prime - 2.5) <= 1e-12
        assert abs(p.alpha - 0.25) <= 1e-12
        assert p.k == 2
        assert abs(p.gamma - 0.1125) <= 1e-12

    def test_case_b_worked_example(self):
        spec = WindowSpec(kind="case_b", q=4.0, r=1.5, s=20.0)
        p = derive_params(spec)
        c = 10.0 / 6.0
        eps_max = brentq(lambda e: c / (1.5 + e) + 1.0 / (20.0 + e) - 1.0,
                         0.0, 10.0, xtol=1e-13)
        assert abs(p.eps - 0.5 * eps_max) <= 1e-9
        margin = 1.0 - 1.0 / p.r_prime - 1.0 / p.s_prime
        assert abs(p.alpha - 0.5 * p.r_prime * margin) <= 1e-14
        assert abs(p.beta - 0.5 * p.s_prime * margin) <= 1e-14
        assert p.beta > 1.0
        assert p.k == 11
        assert abs(p.gamma - 0.9 * p.alpha / 11) <= 1e-14
        assert abs(p.a_neg - 2.0 ** (p.gamma / p.alpha)) <= 1e-14

    def test_compact_worked_example(self):
        p = derive_params(WindowSpec(kind="compact", q=4.0, r=1.5))
        assert abs(p.r_prime - 19.0 / 12.0) <= 1e-12
        assert abs(p.alpha - 7.0 / 24.0) <= 1e-12
        assert p.s is None and p.beta is None and p.gamma is None
        assert p.k is None and p.a_neg is None

    def test_determinism(self):
        spec = WindowSpec(kind="case_b", q=4.0, r=1.5, s=20.0)
        assert derive_params(spec) == derive_params(spec)

    def test_region_errors(self):
        # symmetric threshold at q=4 is r = 4(q-1)/q = 3
        with pytest.raises(ParameterRegionError):
            derive_params(WindowSpec(kind="case_a", q=4.0, r=3.5, s=3.5))
        with pytest.raises(ParameterRegionError):  # exactly On the curve
            derive_params(WindowSpec(kind="case_a", q=4.0, r=3.0, s=3.0))
        with pytest.raises(ParameterRegionError):  # steep point fed to case_a
            derive_params(WindowSpec(kind="case_a", q=4.0, r=1.5, s=20.0))
        with pytest.raises(ParameterRegionError):  # diagonal point to case_b
            derive_params(WindowSpec(kind="case_b", q=4.0, r=2.5, s=2.5))
        with pytest.raises(ParameterRegionError):  # compact needs r < 10/6
            derive_params(WindowSpec(kind="compact", q=4.0, r=2.0))
        with pytest.raises(ParameterRegionError):  # 3 > (3q-2)/(q+2) = 28/12
            derive_params(WindowSpec(kind="compact", q=10.0, r=3.0))
        with pytest.raises(OutOfSectorError):  # u = 1/r > 1
            derive_params(WindowSpec(kind="case_a", q=4.0, r=0.8, s=2.0))
        with pytest.raises(OutOfSectorError):  # v > u
            derive_params(WindowSpec(kind="case_a", q=4.0, r=3.0, s=2.0))
        with pytest.raises(ParameterError):
            derive_params(WindowSpec(kind="box"))

    def test_pinned_eps(self):
        good = WindowSpec(kind="case_a", q=4.0, r=2.5, s=2.5, eps=0.4)
        assert abs(derive_params(good).r_prime - 2.9) <= 1e-15
        for eps in (0.5, 0.6, -0.1):  # interval is the open (0, 0.5)
            with pytest.raises(ParameterRegionError):
                derive_params(WindowSpec(kind="case_a", q=4.0, r=2.5, s=2.5,
                                         eps=eps))

    def test_compact_admissible_at_q_inf(self):
        p = derive_params(WindowSpec(kind="compact", q=math.inf, r=2.0))
        assert abs(p.r_prime - 2.5) <= 1e-15


PA = derive_params(WindowSpec(kind="case_a", q=4.0, r=2.5, s=2.5))
PB = derive_params(WindowSpec(kind="case_b", q=4.0, r=1.5, s=20.0))
PC = derive_params(WindowSpec(kind="compact", q=4.0, r=1.5))
PROF = BumpProfile(0.1)


class TestBuildPsi:
    def test_zero_branch(self):
        assert build_psi(-0.3, 0.7, PA) == 0.0
        assert build_psi(0.0, 0.3, PA) == 0.0

    def test_linear_sheet(self):
        # rho vanishes on x in [2 eta, 1/2), leaving the plane y - 1/2
        for x in (0.2, 0.35, 0.49):
            for y in (0.0, 0.3, 0.9):
                assert abs(build_psi(x, y, PA) - (y - 0.5)) <= 1e-15

    def test_extension_rules(self):
        rng = np.random.default_rng(3)
        x = rng.uniform(-3, 3, size=40)
        y = rng.uniform(-3, 3, size=40)
        lhs = build_psi(x + 1.0, y, PA)
        rhs = build_psi(x, y, PA) + (np.mod(y, 1.0) - 0.5)
        np.testing.assert_allclose(lhs, rhs, atol=1e-12)
        np.testing.assert_allclose(build_psi(x, y + 1.0, PA),
                                   build_psi(x, y, PA), atol=1e-12)

    def test_phase_seam_continuity(self):
        # e^{2 pi i Psi} is continuous across x = +-1/2, x = 0, and y = 0
        ys = np.linspace(0.025, 0.975, 20)
        d = 1e-12
        for seam in (-0.5, 0.0, 0.5):
            left = np.exp(2j * np.pi * build_psi(seam - d, ys, PA))
            right = np.exp(2j * np.pi * build_psi(seam + d, ys, PA))
            assert np.abs(left - right).max() <= 1e-10
        xs = np.linspace(0.02, 0.48, 20)
        below = np.exp(2j * np.pi * build_psi(xs, -d, PA))
        above = np.exp(2j * np.pi * build_psi(xs, d, PA))
        assert np.abs(below - above).max() <= 1e-10

    def test_kind_guard(self):
        with pytest.raises(ParameterError):
            build_psi(0.1, 0.1, PB)


class TestBuildPhi:
    def test_lattice_zero_and_boundary(self):
        assert build_phi(0.0, 0.0, PA) == 0.0
        assert build_phi(1.0, -2.0, PA) == 0.0
        for y in (-0.5, -0.2, 0.0, 0.3):
            assert abs(build_phi(0.5, y, PA) - 1.0) <= 1e-15
            assert abs(build_phi(-0.5, y, PA) - 1.0) <= 1e-15
            assert abs(build_phi(y, 0.5, PA) - 1.0) <= 1e-15

    def test_periodicity_and_symmetry(self):
        rng = np.random.default_rng(5)
        x = rng.uniform(-2, 2, size=50)
        y = rng.uniform(-2, 2, size=50)
        base = build_phi(x, y, PA)
        np.testing.assert_allclose(build_phi(x + 1, y, PA), base, atol=1e-14)
        np.testing.assert_allclose(build_phi(x, y + 1, PA), base, atol=1e-14)
        np.testing.assert_allclose(build_phi(-x, y, PA), base, atol=1e-14)

    def test_eta_square_value(self):
        # inside the eta-square both cutoffs are 1: Phi = f_abg exactly
        pts = [(0.05, -0.07), (-0.08, 0.03), (0.1, 0.1)]
        for x, y in pts:
            want = f_abg(x, y, PA.alpha, PA.beta, PA.gamma, 1.0)
            assert abs(build_phi(x, y, PA) - want) <= 1e-15

    def test_off_lattice_positive(self):
        t = np.arange(128) / 128.0
        X, Y = np.meshgrid(t, t, indexing="ij")
        vals = build_phi(X, Y, PA)
        vals[0, 0] = np.inf  # the lone lattice point of the grid
        assert vals.min() > 0.0


class TestBuildTheta:
    def test_plateau_values(self):
        assert build_theta(-0.45, 0.3, PB) == 1.0
        assert build_theta(0.45, 0.2, PB) == 0.0
        assert abs(build_theta(0.0, 0.0, PB) - 1.0) <= 1e-15
        assert build_theta(0.5, 0.1, PB) == 0.0

    def test_eta_square_matches_f_abg(self):
        for x, y in [(0.05, -0.07), (-0.08, 0.03), (0.0, 0.09)]:
            want = f_abg(x, y, PB.alpha, PB.beta, PB.gamma, PB.a_neg) + 1.0
            assert abs(build_theta(x, y, PB) - want) <= 1e-15

    def test_y_evenness_outside_core(self):
        xs = np.linspace(-0.5, 0.49, 23)
        for y in (0.2, 0.3, 0.45):
            np.testing.assert_allclose(build_theta(xs, y, PB),
                                       build_theta(xs, -y, PB), atol=1e-15)

    def test_positive_on_center_strip(self):
        # lower bound on the strip is min(1, nu(eta)) = nu(0.1) ~ 0.065
        xs = np.linspace(-0.1, 0.1, 41)
        ys = np.linspace(-0.5, 0.49, 45)
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        assert build_theta(X, Y, PB).min() > 0.06

    def test_compact_variant(self):
        assert build_theta(-0.45, 0.3, PC) == 1.0
        assert build_theta(0.45, -0.2, PC) == 0.0
        # y-independent by construction
        xs = np.linspace(-0.5, 0.49, 23)
        np.testing.assert_allclose(build_theta(xs, 0.3, PC),
                                   build_theta(xs, -0.11, PC), atol=0.0)
        want = 2.0 * 0.05 ** PC.alpha + 1.0
        assert abs(build_theta(-0.05, 0.0, PC) - want) <= 1e-15

    def test_kind_guard(self):
        with pytest.raises(ParameterError):
            build_theta(0.1, 0.1, PA)


class TestUpsilon:
    def test_single_zero(self):
        assert upsilon(0.0, 0.0, PB) == 0.0

    def test_extension_rules(self):
        rng = np.random.default_rng(11)
        x = rng.uniform(-2, 2, size=40)
        y = rng.uniform(-2, 2, size=40)
        base = upsilon(x, y, PB)
        np.testing.assert_allclose(upsilon(x, y + 1.0, PB), base, atol=1e-12)
        yr = y - np.floor(y + 0.5)
        np.testing.assert_allclose(upsilon(x + 1.0, y, PB),
                                   -np.exp(2j * np.pi * yr) * base,
                                   atol=1e-12)

    def test_seam_continuity(self):
        d = 1e-12
        ys = np.linspace(-0.49, 0.49, 20)
        for params in (PB, PC):
            for seam in (-0.5, 0.5):
                jump = np.abs(upsilon(seam - d, ys, params)
                              - upsilon(seam + d, ys, params))
                assert jump.max() <= 1e-10
            xs = np.linspace(-0.49, 0.49, 20)
            for seam in (-0.5, 0.5):
                jump = np.abs(upsilon(xs, seam - d, params)
                              - upsilon(xs, seam + d, params))
                assert jump.max() <= 1e-10

    def test_near_zero_modulus_law(self):
        # |Upsilon(t, 0)| = (2^gamma - 1) t^alpha on (0, eta]
        ts = np.linspace(1e-3, 0.1, 25)
        want = (2.0 ** PB.gamma - 1.0) * ts ** PB.alpha
        got = np.abs(upsilon(ts, np.zeros_like(ts), PB))
        np.testing.assert_allclose(got, want, rtol=1e-12)


class TestConstructions:
    def test_case_a_pipeline(self):
        spec = WindowSpec(kind="case_a", q=4.0, r=2.5, s=2.5, N=128, K=8)
        w = construct_case_a(spec)
        assert w.N == 128 and w.K == 64
        assert abs(w.norm - 1.0) <= 1e-12
        # re-forward reproduces the analytic symbol after one normalization
        t = np.arange(128) / 128.0
        X, Y = np.meshgrid(t, t, indexing="ij")
        analytic = np.asarray(zak_symbol(X, Y, PA), dtype=complex)
        scale = zak_inverse(ZakGrid(128, analytic), 64).norm
        G = zak_forward(w)
        assert np.abs(G.values - analytic / scale).max() <= 1e-12
        # modulus minimum in the cell containing (1/2, 1/2)
        jmin, lmin = np.unravel_index(np.argmin(np.abs(G.values)),
                                      G.values.shape)
        assert (jmin, lmin) == (64, 64)
        assert abs(G.values[64, 64]) <= 1e-12

    def test_case_a_bessel_proxy_stable(self):
        tops = []
        for n in (128, 256):
            spec = WindowSpec(kind="case_a", q=4.0, r=2.5, s=2.5, N=n, K=8)
            G = zak_forward(construct_case_a(spec))
            tops.append(np.abs(G.values).max() ** 2)
        assert abs(tops[1] / tops[0] - 1.0) <= 0.02

    def test_constructed_grid_quasi_periodic(self):
        spec = WindowSpec(kind="case_b", q=4.0, r=1.5, s=20.0, N=64, K=8)
        G = zak_forward(construct_case_b(spec))
        for j, l in [(3, 5), (40, 17), (63, 63)]:
            want = np.exp(2j * np.pi * l / 64) * G.value_at(j, l)
            assert abs(G.value_at(j + 64, l) - want) <= 1e-12
            assert abs(G.value_at(j, l + 64) - G.value_at(j, l)) <= 1e-15

    def test_case_b_pipeline(self):
        spec = WindowSpec(kind="case_b", q=4.0, r=1.5, s=20.0, N=128, K=8)
        w = construct_case_b(spec)
        assert abs(w.norm - 1.0) <= 1e-12
        t = np.arange(128) / 128.0
        X, Y = np.meshgrid(t, t, indexing="ij")
        analytic = np.asarray(zak_symbol(X, Y, PB), dtype=complex)
        scale = zak_inverse(ZakGrid(128, analytic), 64).norm
        G = zak_forward(w)
        assert np.abs(G.values - analytic / scale).max() <= 1e-12

    def test_case_b_lower_bound_stable(self):
        mins = []
        for n in (128, 256):
            t = np.arange(n) / n
            X, Y = np.meshgrid(t, t, indexing="ij")
            G = np.abs(np.asarray(zak_symbol(X, Y, PB), dtype=complex))
            A, B = np.abs(X - 0.5), np.abs(Y - 0.5)
            denom = (A ** PB.alpha + B) ** 2
            keep = denom > 0.0
            mins.append((G[keep] ** 2 / denom[keep]).min())
        assert mins[0] > 0.0
        assert abs(mins[1] / mins[0] - 1.0) <= 0.2

    def test_case_b_zero_depth_exponent(self):
        # log-log slope of |G(1/2 + t, 1/2)| over t in (1/N, eta] is alpha
        spec = WindowSpec(kind="case_b", q=4.0, r=1.5, s=20.0, N=256, K=8)
        G = zak_forward(construct_case_b(spec))
        j = np.arange(129, 154)  # t = (j - 128)/256 in (0, 0.1]
        t = (j - 128) / 256.0
        vals = np.abs(G.values[j, 128])
        slope = np.polyfit(np.log(t), np.log(vals), 1)[0]
        assert abs(slope - PB.alpha) <= 0.1 * PB.alpha

    def test_compact_pipeline(self):
        spec = WindowSpec(kind="compact", q=4.0, r=1.5, N=128, K=8)
        w = construct_compact(spec)
        assert abs(w.norm - 1.0) <= 1e-12
        t = w.times()
        mass_outer = np.sum(np.abs(w.samples[np.abs(t) >= 2.0]) ** 2) / w.N
        assert mass_outer <= 1e-10
        # the support is really [-1, 1): two active translates
        mass_mid = np.sum(np.abs(w.samples[(np.abs(t) >= 1.0)]) ** 2) / w.N
        assert mass_mid <= 1e-20
        X, Y = np.meshgrid(np.arange(128) / 128.0, np.arange(128) / 128.0,
                           indexing="ij")
        analytic = np.asarray(zak_symbol(X, Y, PC), dtype=complex)
        scale = zak_inverse(ZakGrid(128, analytic), 64).norm
        assert np.abs(zak_forward(w).values - analytic / scale).max() <= 1e-8

    def test_construct_kind_guards(self):
        spec = WindowSpec(kind="case_a", q=4.0, r=2.5, s=2.5)
        with pytest.raises(ParameterError):
            construct_case_b(spec)
        with pytest.raises(ParameterError):
            construct_compact(spec)
        with pytest.raises(ParameterError):
            construct_case_a(WindowSpec(kind="box"))


class TestReferenceWindows:
    def test_box(self):
        w = box_window(64, 8)
        assert w.norm == 1.0
        assert complex(w.samples[8 * 64]) == 1.0 + 0.0j

    def test_gaussian_peak_and_norm(self):
        w = gaussian_window(1.0, 64, 8)
        assert abs(w.norm - 1.0) <= 1e-10
        assert abs(abs(w.samples[8 * 64]) - 2.0 ** 0.25) <= 1e-10

    def test_gaussian_tail_oracle(self):
        # raw sampled mass approximates the full integral 1 to the erfc tail
        t = -6 + np.arange(2 * 6 * 64) / 64.0
        raw = np.sum(2.0 ** 0.5 * np.exp(-2.0 * np.pi * t ** 2)) / 64.0
        assert abs(raw - 1.0) <= 1e-12

    def test_parameter_errors(self):
        with pytest.raises(ParameterError):
            gaussian_window(-1.0, 64, 8)
        with pytest.raises(NyquistError):
            gaussian_window(1.0, 8, 8)
        with pytest.raises(NyquistError):
            box_window(8, 8)
