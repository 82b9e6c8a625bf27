"""Transform, derivative, dealiasing, projection and Poisson contracts."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bvd.spectral import (
    Field,
    Grid,
    SpectralField,
    dealias,
    derivative,
    divergence_max,
    leray_project,
    poisson_solve,
    to_physical,
    to_spectral,
)
from bvd.norms import lq_norm, sobolev_norm, l2_norm_spectral


class TestGrid:
    def test_defaults(self):
        g = Grid(64, 32)
        assert g.lx == pytest.approx(2 * np.pi)
        assert g.spectral_shape == (64, 17)

    @pytest.mark.parametrize("nx,ny", [(7, 64), (64, 63), (4, 64), (64, 6), (0, 8)])
    def test_rejects_bad_sizes(self, nx, ny):
        with pytest.raises(ValueError):
            Grid(nx, ny)

    def test_rejects_bad_box(self):
        with pytest.raises(ValueError, match="lx"):
            Grid(64, 64, lx=-1.0)

    def test_wavenumber_scaling(self):
        g = Grid(16, 16, lx=4 * np.pi)
        # integer modes scaled by 2*pi/lx
        assert g.kx[1, 0] == pytest.approx(0.5)
        assert g.ky[0, 1] == pytest.approx(1.0)


class TestTransforms:
    def test_zero_field_zero_coefficients(self, grid64):
        F = to_spectral(Field.zeros(grid64))
        assert np.all(F.coeffs == 0)

    def test_cos_x_two_modes(self, grid64):
        X, _ = grid64.mesh()
        F = to_spectral(Field(grid64, np.cos(X)))
        mags = np.abs(F.coeffs)
        nz = np.argwhere(mags > 1e-9 * mags.max())
        assert {tuple(ix) for ix in nz} == {(1, 0), (grid64.nx - 1, 0)}

    def test_round_trip(self, grid64, rng):
        f = Field(grid64, rng.standard_normal(grid64.shape))
        back = to_physical(to_spectral(f))
        err = np.abs(back.values - f.values).max() / np.abs(f.values).max()
        assert err <= 1e-12

    def test_shape_mismatch_rejected(self, grid64):
        with pytest.raises(ValueError, match="shape"):
            Field(grid64, np.zeros((3, 3)))
        with pytest.raises(ValueError, match="shape"):
            SpectralField(grid64, np.zeros((64, 64), dtype=complex))

    def test_nonfinite_rejected(self, grid64):
        vals = np.zeros(grid64.shape)
        vals[0, 0] = np.nan
        with pytest.raises(ValueError, match="finite"):
            Field(grid64, vals)

    @settings(max_examples=15, deadline=None)
    @given(st.integers(0, 2**31 - 1))
    def test_round_trip_property(self, seed):
        g = Grid(16, 16)
        f = Field(g, np.random.default_rng(seed).standard_normal(g.shape))
        back = to_physical(to_spectral(f))
        assert np.abs(back.values - f.values).max() <= 1e-12 * max(1.0, np.abs(f.values).max())


class TestDerivative:
    def test_dx_cos(self, grid64):
        X, _ = grid64.mesh()
        d = to_physical(derivative(to_spectral(Field(grid64, np.cos(X))), "x"))
        assert np.abs(d.values + np.sin(X)).max() <= 1e-12

    def test_dyy_cos(self, grid64):
        _, Y = grid64.mesh()
        d = to_physical(derivative(to_spectral(Field(grid64, np.cos(Y))), "y", order=2))
        assert np.abs(d.values + np.cos(Y)).max() <= 1e-12

    def test_dx_of_y_field_is_zero(self, grid64):
        _, Y = grid64.mesh()
        d = derivative(to_spectral(Field(grid64, np.sin(3 * Y) + Y * 0)), "x")
        assert np.all(d.coeffs == 0)

    def test_derivatives_commute(self, grid64, rng):
        F = to_spectral(Field(grid64, rng.standard_normal(grid64.shape)))
        a = derivative(derivative(F, "x"), "y")
        b = derivative(derivative(F, "y"), "x")
        scale = np.abs(a.coeffs).max()
        assert np.abs(a.coeffs - b.coeffs).max() <= 1e-12 * scale

    def test_nyquist_zeroed(self, grid64):
        c = np.ones(grid64.spectral_shape, dtype=complex)
        d = derivative(SpectralField(grid64, c), "x")
        assert np.all(d.coeffs[grid64.nx // 2, :] == 0)
        assert np.all(d.coeffs[:, grid64.ny // 2] == 0)

    def test_bad_args(self, grid64):
        F = to_spectral(Field.zeros(grid64))
        with pytest.raises(ValueError):
            derivative(F, "z")
        with pytest.raises(ValueError):
            derivative(F, "x", order=0)


class TestDealias:
    def test_retained_band_unchanged(self, grid64):
        X, Y = grid64.mesh()
        f = Field(grid64, np.cos(5 * X) * np.sin(7 * Y))
        F = to_spectral(f)
        assert np.abs(dealias(F).coeffs - F.coeffs).max() <= 1e-12 * np.abs(F.coeffs).max()

    def test_nyquist_mode_removed(self, grid64):
        X, _ = grid64.mesh()
        f = Field(grid64, np.cos((grid64.nx // 2) * X))
        assert np.all(dealias(to_spectral(f)).coeffs == 0)

    def test_idempotent(self, grid64, rng):
        F = to_spectral(Field(grid64, rng.standard_normal(grid64.shape)))
        once = dealias(F)
        assert np.all(dealias(once).coeffs == once.coeffs)


class TestLerayProjection:
    def _stream_velocity(self, grid, rng):
        phi = to_spectral(Field(grid, rng.standard_normal(grid.shape)))
        u = to_physical(derivative(phi, "y")) * -1.0
        v = to_physical(derivative(phi, "x"))
        return u, v

    def test_divergence_free_input_unchanged(self, grid64, rng):
        u, v = self._stream_velocity(grid64, rng)
        pu, pv = leray_project(u, v)
        scale = max(np.abs(u.values).max(), np.abs(v.values).max())
        assert np.abs(pu.values - u.values).max() <= 1e-12 * scale
        assert np.abs(pv.values - v.values).max() <= 1e-12 * scale

    def test_pure_gradient_annihilated(self, grid64, rng):
        phi = to_spectral(Field(grid64, rng.standard_normal(grid64.shape)))
        u = to_physical(derivative(phi, "x"))
        v = to_physical(derivative(phi, "y"))
        pu, pv = leray_project(u, v)
        scale = max(np.abs(u.values).max(), np.abs(v.values).max())
        assert np.abs(pu.values).max() <= 1e-12 * scale
        assert np.abs(pv.values).max() <= 1e-12 * scale

    def test_random_pair_divergence_residual(self, grid64, rng):
        u = Field(grid64, rng.standard_normal(grid64.shape))
        v = Field(grid64, rng.standard_normal(grid64.shape))
        pu, pv = leray_project(u, v)
        scale = sobolev_norm(pu, 1) + sobolev_norm(pv, 1)
        assert divergence_max(pu, pv) <= 1e-12 * scale

    def test_mean_modes_unchanged(self, grid64):
        u = Field(grid64, np.full(grid64.shape, 1.3))
        v = Field(grid64, np.full(grid64.shape, -0.4))
        pu, pv = leray_project(u, v)
        assert pu.values.mean() == pytest.approx(1.3, abs=1e-14)
        assert pv.values.mean() == pytest.approx(-0.4, abs=1e-14)

    def test_grid_mismatch(self, grid64):
        with pytest.raises(ValueError, match="grids"):
            leray_project(Field.zeros(grid64), Field.zeros(Grid(32, 32)))

    @settings(max_examples=10, deadline=None)
    @given(st.integers(0, 2**31 - 1))
    def test_idempotent_property(self, seed):
        g = Grid(32, 32)
        r = np.random.default_rng(seed)
        u = Field(g, r.standard_normal(g.shape))
        v = Field(g, r.standard_normal(g.shape))
        pu, pv = leray_project(u, v)
        pu2, pv2 = leray_project(pu, pv)
        scale = max(np.abs(pu.values).max(), np.abs(pv.values).max(), 1e-300)
        assert np.abs(pu2.values - pu.values).max() <= 1e-12 * scale
        assert np.abs(pv2.values - pv.values).max() <= 1e-12 * scale


class TestPoisson:
    def test_cos_y(self, grid64):
        _, Y = grid64.mesh()
        phi = poisson_solve(Field(grid64, np.cos(Y)))
        assert np.abs(phi.values + np.cos(Y)).max() <= 1e-12

    def test_zero(self, grid64):
        assert np.all(poisson_solve(Field.zeros(grid64)).values == 0)

    def test_random_mean_zero_residual(self, grid64, rng):
        vals = rng.standard_normal(grid64.shape)
        vals -= vals.mean()
        # keep clear of the Nyquist modes the operators ignore
        F = dealias(to_spectral(Field(grid64, vals)))
        f = to_physical(F)
        phi = to_spectral(poisson_solve(f))
        lap = to_physical(
            SpectralField(grid64, derivative(phi, "x", 2).coeffs + derivative(phi, "y", 2).coeffs)
        )
        resid = np.abs(lap.values - (f.values - f.values.mean())).max()
        assert resid <= 1e-10 * np.abs(f.values).max()

    def test_inverse_of_laplacian(self, grid64, rng):
        F = dealias(to_spectral(Field(grid64, rng.standard_normal(grid64.shape))))
        c = F.coeffs.copy()
        c[0, 0] = 0.0
        f = to_physical(SpectralField(grid64, c))
        lap = to_physical(
            SpectralField(
                grid64,
                derivative(F, "x", 2).coeffs + derivative(F, "y", 2).coeffs,
            )
        )
        back = poisson_solve(lap)
        assert np.abs(back.values - f.values).max() <= 1e-10 * np.abs(f.values).max()

    def test_result_mean_zero(self, grid64, rng):
        phi = poisson_solve(Field(grid64, rng.standard_normal(grid64.shape)))
        assert abs(phi.values.mean()) <= 1e-13


def test_parseval_l2(grid64):
    rng = np.random.default_rng(1)
    for _ in range(100):
        f = Field(grid64, rng.standard_normal(grid64.shape))
        quad = lq_norm(f, 2)
        spec = l2_norm_spectral(to_spectral(f))
        assert abs(quad - spec) <= 1e-10 * quad
