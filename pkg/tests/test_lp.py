"""Shell decomposition, Besov/Triebel-Lizorkin norms, splitting, Bernstein."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bvd.spectral import Field, Grid, to_spectral
from bvd.norms import lq_norm, sobolev_norm
from bvd.lp import (
    ShellSystem,
    bernstein_ratio,
    besov_norm,
    decompose,
    shell_profile,
    smooth_step,
    split_low_high,
    tl_norm,
)
from bvd.synth import random_band_field, single_mode


class TestShellSystem:
    def test_profile_support(self):
        r = np.linspace(0, 3, 1201)
        psi = shell_profile(r)
        assert np.all(psi[r < 0.5] == 0)
        assert np.all(psi[r > 2.0] == 0)
        assert psi[r == 1.0] > 0

    def test_smooth_step_endpoints(self):
        assert smooth_step(np.array([0.0, 1.0] )).tolist() == [1.0, 1.0]
        assert smooth_step(np.array([2.0, 5.0])).tolist() == [0.0, 0.0]

    def test_partition_of_unity(self, grid128):
        ss = ShellSystem(grid128)
        for flavor in ("homogeneous", "inhomogeneous"):
            total = np.zeros(grid128.spectral_shape)
            if flavor == "inhomogeneous":
                total += ss.low_block_multiplier
            for m in ss.multipliers(flavor).values():
                total += m
            assert np.abs(total - 1.0).max() <= 1e-12

    def test_interior_annulus_support(self, grid128):
        ss = ShellSystem(grid128)
        k = grid128.kmag
        for j in range(1, ss.j_max):
            m = ss.shell_multiplier(j, "homogeneous")
            outside = (k < 2.0 ** (j - 1)) | (k > 2.0 ** (j + 1))
            assert np.all(m[outside] == 0.0)

    def test_j_range(self, grid128):
        ss = ShellSystem(grid128)
        assert ss.j_min == 0
        assert ss.j_max == int(np.ceil(np.log2(grid128.kmax))) - 1
        with pytest.raises(ValueError):
            ss.shell_multiplier(ss.j_max + 1)


class TestDecompose:
    def test_zero_field(self, grid128):
        dec = decompose(Field.zeros(grid128), "homogeneous")
        assert all(np.all(p.values == 0) for p in dec.pieces.values())

    def test_single_mode_neighbors_only(self, grid128):
        j = 4
        f = single_mode(grid128, 2**j, 0)
        dec = decompose(f, "homogeneous")
        live = {i for i, p in dec.pieces.items() if np.abs(p.values).max() > 1e-12}
        assert live <= {j - 1, j, j + 1}
        rec = dec.reconstruct()
        assert np.abs(rec.values - f.values).max() <= 1e-10

    def test_piece_spectrum_in_annulus(self, grid128, rng):
        f = Field(grid128, rng.standard_normal(grid128.shape))
        dec = decompose(f, "homogeneous")
        ss = ShellSystem(grid128)
        for j in range(1, ss.j_max):
            c = to_spectral(dec.pieces[j]).coeffs
            outside = (grid128.kmag < 2.0 ** (j - 1)) | (grid128.kmag > 2.0 ** (j + 1))
            assert np.abs(c[outside]).max() <= 1e-12 * max(np.abs(c).max(), 1e-300)

    @pytest.mark.parametrize("flavor", ["homogeneous", "inhomogeneous"])
    def test_reconstruction_random(self, grid128, flavor):
        rng = np.random.default_rng(5)
        for _ in range(10):
            f = Field(grid128, rng.standard_normal(grid128.shape))
            rec = decompose(f, flavor).reconstruct()
            err = np.abs(rec.values - f.values).max() / np.abs(f.values).max()
            assert err <= 1e-10

    @settings(max_examples=10, deadline=None)
    @given(st.integers(0, 2**31 - 1), st.sampled_from(["homogeneous", "inhomogeneous"]))
    def test_reconstruction_property(self, seed, flavor):
        g = Grid(32, 32)
        f = Field(g, np.random.default_rng(seed).standard_normal(g.shape))
        rec = decompose(f, flavor).reconstruct()
        assert np.abs(rec.values - f.values).max() <= 1e-10 * np.abs(f.values).max()


class TestBesov:
    def test_zero(self, grid128):
        assert besov_norm(Field.zeros(grid128), 1.0, 2, 2) == 0.0

    def test_b22_equivalent_to_sobolev(self, grid128):
        rng = np.random.default_rng(7)
        for s, n in ((1.0, 20), (2.0, 100)):
            ratios = []
            for i in range(n):
                f = random_band_field(grid128, rng, 1.0, grid128.kmax / 2.5, -1.0)
                ratios.append(besov_norm(f, s, 2, 2) / sobolev_norm(f, s))
            assert max(ratios) <= 4.0
            assert min(ratios) >= 0.25

    def test_single_mode_p2_q2_against_piece_weights(self, grid128):
        s = 1.5
        amp = 0.7
        ss = ShellSystem(grid128)
        for j in (3, 4, 5):
            f = single_mode(grid128, 2**j, 0, amplitude=amp)
            f_l2 = lq_norm(f, 2)
            # oracle: multiplier weights at |k| = 2^j, from the profile itself
            expected_sq = 0.0
            for i in range(ss.j_min, ss.j_max + 1):
                if i == ss.j_max:
                    w = 1.0 - smooth_step(np.array([2.0 ** (1 - ss.j_max) * 2.0**j]))[0]
                elif i == 0:
                    w = smooth_step(np.array([2.0**j]))[0]
                else:
                    w = shell_profile(np.array([2.0**j / 2.0**i]))[0]
                expected_sq += (2.0 ** (i * s) * w * f_l2) ** 2
            got = besov_norm(f, s, 2, 2, "homogeneous")
            assert got == pytest.approx(np.sqrt(expected_sq), rel=1e-10)

    def test_qinf(self, grid128, rng):
        f = Field(grid128, rng.standard_normal(grid128.shape))
        v = besov_norm(f, 0.5, 2, np.inf)
        assert np.isfinite(v) and v > 0


class TestTriebelLizorkin:
    def test_zero(self, grid128):
        assert tl_norm(Field.zeros(grid128), 0.0, 2, 2) == 0.0

    def test_f022_matches_b022(self, grid128, rng):
        f = Field(grid128, rng.standard_normal(grid128.shape))
        a = tl_norm(f, 0.0, 2, 2)
        b = besov_norm(f, 0.0, 2, 2)
        assert abs(a - b) <= 1e-10 * b

    def test_f0p2_comparable_to_lp(self, grid128):
        rng = np.random.default_rng(11)
        for p in (4.0 / 3.0, 2.0, 4.0):
            ratios = []
            for _ in range(20):
                f = random_band_field(grid128, rng, 1.0, grid128.kmax / 2.5, -1.0)
                ratios.append(tl_norm(f, 0.0, p, 2) / lq_norm(f, p))
            assert max(ratios) <= 4.0
            assert min(ratios) >= 0.25

    def test_p_range_enforced(self, grid128):
        with pytest.raises(ValueError):
            tl_norm(Field.zeros(grid128), 0.0, 1.0, 2)


class TestSplitLowHigh:
    def test_inside_ball_high_vanishes(self, grid128):
        f = single_mode(grid128, 3, 2)
        low, high = split_low_high(f, 8.0)
        assert np.abs(high.values).max() <= 1e-13
        assert np.abs(low.values - f.values).max() <= 1e-13

    def test_outside_ball_low_vanishes(self, grid128):
        f = single_mode(grid128, 0, 20)
        low, high = split_low_high(f, 8.0)
        assert np.abs(low.values).max() <= 1e-13

    def test_complement_exact(self, grid128, rng):
        f = Field(grid128, rng.standard_normal(grid128.shape))
        low, high = split_low_high(f, 13.7)
        assert np.array_equal(low.values + high.values, f.values) or (
            np.abs(low.values + high.values - f.values).max() <= 1e-14
        )

    def test_bad_radius(self, grid128):
        with pytest.raises(ValueError):
            split_low_high(Field.zeros(grid128), 0.0)

    def test_highpass_l2_contraction(self, grid128):
        # sharp cutoff is an orthogonal projection in L^2
        rng = np.random.default_rng(2)
        for radius in (2.0, 4.0, 8.0, 16.0, 32.0):
            f = Field(grid128, rng.standard_normal(grid128.shape))
            _, high = split_low_high(f, radius)
            assert lq_norm(high, 2) <= lq_norm(f, 2) * (1 + 1e-12)

    def test_highpass_lq_stability_ensemble(self, grid128):
        # ||highpass f||_q <= C ||f||_q with one C across radii and q
        rng = np.random.default_rng(4)
        worst = 0.0
        for _ in range(100):
            f = random_band_field(grid128, rng, 1.0, 0.9 * grid128.kmax, -1.0)
            for radius in (2.0, 4.0, 8.0, 16.0, 32.0):
                _, high = split_low_high(f, radius)
                for q in (4.0 / 3.0, 2.0, 4.0):
                    worst = max(worst, lq_norm(high, q) / lq_norm(f, q))
        assert worst <= 2.0  # observed ~1.05; sharp cutoffs are mild here


class TestBernstein:
    def test_zero_piece(self, grid128):
        f = single_mode(grid128, 2, 0)  # shell 1; shell 4 is empty
        assert bernstein_ratio(f, 4, 2, 4, 0.5) == 0.0

    def test_identity_case(self, grid128, rng):
        f = random_band_field(grid128, rng, 2.0, 40.0, -1.0)
        for j in (2, 3, 4):
            r = bernstein_ratio(f, j, 2, 2, 0.0)
            assert r <= 1.0 + 1e-10
            assert r == pytest.approx(1.0, rel=1e-9)

    def test_p_le_q_enforced(self, grid128):
        with pytest.raises(ValueError):
            bernstein_ratio(Field.zeros(grid128), 2, 4, 2, 0.5)

    def test_sweep_bounded_j_independent(self, grid128):
        rng = np.random.default_rng(6)
        ss = ShellSystem(grid128)
        js = range(2, ss.j_max - 1)
        per_j = {j: 0.0 for j in js}
        for i in range(20):
            f = random_band_field(grid128, rng, 1.0, 0.9 * grid128.kmax, -1.0)
            for j in js:
                for alpha, p, q in ((0.5, 2, np.inf), (1.0, 2, 2)):
                    per_j[j] = max(per_j[j], bernstein_ratio(f, j, p, q, alpha))
        vals = list(per_j.values())
        assert all(np.isfinite(v) for v in vals)
        assert max(vals) <= 10.0
