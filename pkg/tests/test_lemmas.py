"""Inequality trials: closed forms, invariances, rejection rules, ensembles."""

import math

import numpy as np
import pytest

from bvd.spectral import Field, Grid
from bvd.norms import lq_norm, sobolev_norm
from bvd.lemmas import (
    DegenerateTrial,
    TrialRejected,
    check_interpolation,
    check_low_high,
    check_triple_product,
    check_triple_product_preset,
    ensemble_stats,
    interpolation_ensemble,
    log_factor,
    lowhigh_ensemble,
    oscillation_sweep,
    triple_bumps,
    triple_degradation,
    triple_ensemble,
)
from bvd.synth import bump, single_mode


RGRID = (2.0, 3.0, 4.0, 6.0, 8.0, 12.0, 16.0, 24.0, 32.0)


def abs_cos_moment(r):
    return math.gamma((r + 1) / 2) / (math.sqrt(math.pi) * math.gamma(r / 2 + 1))


class TestInterpolation:
    def test_cos_x_closed_form(self, grid128):
        f = single_mode(grid128, 1, 0)
        trial = check_interpolation(f, 2.0, RGRID)
        assert trial.lhs == pytest.approx(1.0, abs=1e-10)
        # oracle: gamma-function moments for the r-grid sup, direct Sobolev value
        ratio = max(
            (abs_cos_moment(r) * 4 * np.pi**2) ** (1 / r) / np.sqrt(r * np.log(r))
            for r in RGRID
        )
        hs = np.sqrt(1 + 1) ** 2 * np.pi * np.sqrt(2)  # (1+|k|^2)^(s/2), s=2, |k|=1
        expect = ratio * log_factor(hs)
        assert trial.rhs_factor == pytest.approx(expect, rel=1e-9)
        assert np.isfinite(trial.empirical_c)

    def test_scaling_doubles_lhs_exactly(self, grid128):
        f = single_mode(grid128, 3, 2, amplitude=1.3)
        t1 = check_interpolation(f, 2.0, RGRID)
        t2 = check_interpolation(Field(grid128, 2.0 * f.values), 2.0, RGRID)
        assert t2.lhs == 2.0 * t1.lhs

    def test_zero_field_skipped(self, grid128):
        with pytest.raises(DegenerateTrial):
            check_interpolation(Field.zeros(grid128), 2.0, RGRID)

    def test_s_must_exceed_one(self, grid128):
        with pytest.raises(ValueError):
            check_interpolation(single_mode(grid128, 1, 0), 1.0, RGRID)

    def test_oscillation_sweep_bounded(self, grid128):
        trials = oscillation_sweep(grid128, 2.0, RGRID)
        cs = [t.empirical_c for t in trials]
        assert all(np.isfinite(c) for c in cs)
        # high-frequency modes only shrink the constant through the log factor
        assert max(cs) == cs[0]

    def test_ensemble_reproducible(self, grid64):
        a, _ = interpolation_ensemble(grid64, 12, seed=3)
        b, _ = interpolation_ensemble(grid64, 12, seed=3)
        assert [t.empirical_c for t in a] == [t.empirical_c for t in b]
        stats = ensemble_stats(a)
        assert np.isfinite(stats["max"])

    def test_hs_floor_applied(self, grid64):
        trials, rescaled = interpolation_ensemble(grid64, 12, seed=3, hs_floor=1e3)
        assert rescaled > 0
        assert all(t.params["hs_norm"] >= 1e3 - 1e-6 for t in trials)


class TestTripleProduct:
    def test_zero_factor(self, grid128):
        f, g, h = triple_bumps(grid128, seed=1)
        z = Field.zeros(grid128)
        trial = check_triple_product(f, g, z, 3.0)
        assert trial.lhs == 0.0
        assert trial.empirical_c == 0.0

    def test_translation_invariance(self, grid128):
        f, g, h = triple_bumps(grid128, seed=2)
        t1 = check_triple_product(f, g, h, 3.0)
        shift = (grid128.nx // 8, grid128.ny // 16)
        fs, gs, hs = (
            Field(grid128, np.roll(x.values, shift, axis=(0, 1))) for x in (f, g, h)
        )
        t2 = check_triple_product(fs, gs, hs, 3.0)
        assert t2.lhs == pytest.approx(t1.lhs, rel=1e-12)
        assert t2.rhs_factor == pytest.approx(t1.rhs_factor, rel=1e-12)

    def test_boundary_support_rejected(self, grid128):
        f, g, h = triple_bumps(grid128, seed=3)
        periodic = single_mode(grid128, 1, 0)
        with pytest.raises(TrialRejected):
            check_triple_product(periodic, g, h, 3.0)

    def test_q_less_than_two_rejected(self, grid128):
        f, g, h = triple_bumps(grid128, seed=4)
        with pytest.raises(ValueError):
            check_triple_product(f, g, h, 1.5)

    def test_presets_match_displayed_exponents(self, grid128):
        from bvd.spectral import derivative, to_physical, to_spectral

        f, g, h = triple_bumps(grid128, seed=5)
        g_y = to_physical(derivative(to_spectral(g), "y"))
        h_x = to_physical(derivative(to_spectral(h), "x"))
        thirds = check_triple_product_preset(f, g, h, "thirds")
        expect3 = (
            lq_norm(f, 2)
            * lq_norm(g, 2) ** (2 / 3) * lq_norm(g_y, 2) ** (1 / 3)
            * lq_norm(h, 4) ** (2 / 3) * lq_norm(h_x, 2) ** (1 / 3)
        )
        assert thirds.rhs_factor == pytest.approx(expect3, rel=1e-12)
        halves = check_triple_product_preset(f, g, h, "halves")
        expect2 = (
            lq_norm(f, 2)
            * lq_norm(g, 2) ** 0.5 * lq_norm(g_y, 2) ** 0.5
            * lq_norm(h, 2) ** 0.5 * lq_norm(h_x, 2) ** 0.5
        )
        assert halves.rhs_factor == pytest.approx(expect2, rel=1e-12)
        with pytest.raises(ValueError):
            check_triple_product_preset(f, g, h, "quarters")

    def test_refinement_stability(self):
        # the same continuum bumps on both grids give comparable constants
        coarse = Grid(128, 128)
        fine = Grid(256, 256)
        for i in range(4):
            fc, gc, hc = triple_bumps(coarse, seed=10 + i)
            ff, gf, hf = triple_bumps(fine, seed=10 + i)
            for q in (2.0, 3.0, 4.0, 8.0):
                c_lo = check_triple_product(fc, gc, hc, q).empirical_c
                c_hi = check_triple_product(ff, gf, hf, q).empirical_c
                assert c_lo <= 2.0 * c_hi
                assert c_hi <= 2.0 * c_lo

    def test_degradation_grows(self, grid128):
        trials = triple_degradation(grid128, (0.05, 0.35), q=3.0)
        assert trials[-1].empirical_c > trials[0].empirical_c

    def test_ensemble_finite(self, grid128):
        stats = ensemble_stats(triple_ensemble(grid128, 4, seed=0))
        assert stats["n"] > 0
        assert np.isfinite(stats["max"])


class TestLowHigh:
    def test_band_limited_inside_ball(self, grid128):
        f = single_mode(grid128, 3, 1)
        lo, hq, st = check_low_high(f, 8.0, 4.0)
        assert hq.lhs <= 1e-12
        assert st.lhs <= 1e-12
        assert lo.lhs == pytest.approx(1.0, abs=1e-9)

    def test_q4_specialization_identity(self, grid128, rng):
        # rhs factor at q = 4 reduces to 4 R^{-1/2} ||f||_{H^1}
        f = Field(grid128, rng.standard_normal(grid128.shape))
        for radius in (4.0, 16.0, 64.0):
            _, hq, _ = check_low_high(f, radius, 4.0)
            assert hq.rhs_factor == pytest.approx(
                4.0 * radius**-0.5 * sobolev_norm(f, 1), rel=1e-12
            )

    def test_radius_and_q_validation(self, grid128):
        f = single_mode(grid128, 1, 0)
        with pytest.raises(ValueError):
            check_low_high(f, 2.0, 4.0)
        with pytest.raises(ValueError):
            check_low_high(f, 8.0, 1.0)
        with pytest.raises(ValueError):
            check_low_high(f, 8.0, np.inf)

    def test_small_ensemble_reproducible(self):
        g = Grid(128, 128)
        radii = (4.0, 8.0, 16.0)
        a = lowhigh_ensemble(g, 5, radii, (2.0, 4.0), seed=9)
        b = lowhigh_ensemble(g, 5, radii, (2.0, 4.0), seed=9)
        assert [t.empirical_c for t in a] == [t.empirical_c for t in b]
        assert all(np.isfinite(t.empirical_c) for t in a)


def test_lemma_trial_guard():
    from bvd.lemmas import LemmaTrial

    with pytest.raises(ValueError):
        LemmaTrial("x", {}, lhs=1.0, rhs_factor=0.0)
    t = LemmaTrial("x", {"q": 2.0, "R": 4.0}, lhs=1.0, rhs_factor=2.0)
    assert t.empirical_c == 0.5
    assert t.params_str() == "R=4.0;q=2.0"
