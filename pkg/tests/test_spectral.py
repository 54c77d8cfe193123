import numpy as np
import pytest

from sled_oam import (
    CoherenceParams,
    DomainError,
    KQuadrature,
    SpectralGrid,
    gaas_nb_junction,
    mixing_rates,
    rate_surface,
    rate_surfaces,
    s_bqp,
    s_cp,
)
from sled_oam.errors import ConvergenceError

SMALL_GRID = SpectralGrid(
    detunings=(-1.0, 0.0, 1.0),
    temperatures=(0.4, 0.8),
    k_integration=KQuadrature(nodes=256),
)


class TestValidation:
    def test_quadrature_bounds(self):
        with pytest.raises(DomainError):
            KQuadrature(nodes=32)
        with pytest.raises(DomainError):
            KQuadrature(cutoff_delta0=0.0)
        with pytest.raises(DomainError):
            KQuadrature(patch_area_um2=-1.0)

    def test_grid_requires_increasing_detunings(self):
        with pytest.raises(DomainError):
            SpectralGrid(detunings=(1.0, 0.0, -1.0), temperatures=(0.5,))

    def test_grid_requires_symmetry(self):
        with pytest.raises(DomainError):
            SpectralGrid(detunings=(-2.0, 0.0, 1.0), temperatures=(0.5,))

    def test_grid_requires_open_temperature_interval(self):
        for bad in (0.0, 1.0, -0.2, 1.5):
            with pytest.raises(DomainError):
                SpectralGrid(detunings=(-1.0, 1.0), temperatures=(bad,))

    def test_temperature_domain_of_rates(self, junction, fast_quad):
        for bad in (0.0, 1.0, -0.5):
            with pytest.raises(DomainError):
                s_cp(1.0, bad, junction, fast_quad)

    def test_enhancement_bound(self):
        with pytest.raises(DomainError):
            CoherenceParams(0.5)

    def test_channel_name(self, junction):
        with pytest.raises(DomainError):
            rate_surface(SMALL_GRID, junction, "qp")


class TestDetuningSymmetry:
    def test_both_channels_exactly_even(self, junction, fast_quad):
        for t in (0.1, 0.5, 0.9):
            for d in (0.3, 1.7, 2.0, 4.9):
                assert s_cp(d, t, junction, fast_quad) == s_cp(-d, t, junction, fast_quad)
                assert s_bqp(d, t, junction, fast_quad) == s_bqp(-d, t, junction, fast_quad)

    def test_surfaces_mirror_symmetric(self, junction):
        grid = SpectralGrid(
            detunings=tuple(np.linspace(-3.0, 3.0, 13)),
            temperatures=(0.3, 0.9),
            k_integration=KQuadrature(nodes=512),
        )
        for channel in ("cp", "bqp"):
            surface = rate_surface(grid, junction, channel)
            mirrored = surface.values[:, ::-1]
            assert np.abs(surface.values - mirrored).max() <= 1e-10 * surface.values.max()


class TestPositivity:
    def test_rates_nonnegative(self, junction, fast_quad):
        for t in (0.05, 0.5, 0.95):
            for d in np.linspace(-6, 6, 13):
                assert s_cp(d, t, junction, fast_quad) >= 0.0
                assert s_bqp(d, t, junction, fast_quad) >= 0.0


class TestConvergence:
    def test_default_nodes_pass_doubling_check(self, junction):
        quad = KQuadrature(nodes=4096, verify=True)
        for t in (0.1, 0.9):
            for d in (0.0, 2.0, 5.0):
                s_cp(d, t, junction, quad)
                s_bqp(d, t, junction, quad)

    def test_sharp_resonance_on_coarse_grid_raises(self):
        # tiny broadening at minimal node count cannot resolve the resonance
        jp = gaas_nb_junction(dephasing_time=1e6)
        quad = KQuadrature(nodes=64, verify=True)
        with pytest.raises(ConvergenceError) as err:
            s_cp(2.0, 0.1, jp, quad)
        assert err.value.coarse is not None and err.value.refined is not None

    def test_surface_error_carries_grid_point(self):
        jp = gaas_nb_junction(dephasing_time=1e6)
        grid = SpectralGrid(
            detunings=(-2.0, 0.0, 2.0),
            temperatures=(0.1,),
            k_integration=KQuadrature(nodes=64, verify=True),
        )
        with pytest.raises(ConvergenceError) as err:
            rate_surface(grid, jp, "cp")
        assert "t=" in str(err.value) and "d=" in str(err.value)


class TestRateSurface:
    def test_shape_and_finiteness(self, junction):
        surface = rate_surface(SMALL_GRID, junction, "cp")
        assert surface.values.shape == (2, 3)
        assert np.all(np.isfinite(surface.values))
        assert np.all(surface.values >= 0.0)

    def test_cp_max_exactly_one(self, junction):
        surface = rate_surface(SMALL_GRID, junction, "cp")
        assert surface.values.max() == 1.0

    def test_bqp_normalized_by_cp_reference(self, junction):
        bqp_alone = rate_surface(SMALL_GRID, junction, "bqp")
        cp, bqp = rate_surfaces(SMALL_GRID, junction)
        assert np.array_equal(bqp_alone.values, bqp.values)
        assert bqp_alone.normalization == cp.normalization

    def test_thread_count_does_not_change_bits(self, junction):
        grid = SpectralGrid(
            detunings=tuple(np.linspace(-3, 3, 7)),
            temperatures=(0.2, 0.5, 0.8),
            k_integration=KQuadrature(nodes=256),
        )
        seq = rate_surface(grid, junction, "cp", workers=1)
        par = rate_surface(grid, junction, "cp", workers=4)
        assert np.array_equal(seq.values, par.values)

    def test_gap_collapse_pulls_peak_inward(self, junction):
        grid = SpectralGrid(
            detunings=tuple(np.linspace(-6, 6, 61)),
            temperatures=(0.1, 0.95),
            k_integration=KQuadrature(nodes=1024),
        )
        surface = rate_surface(grid, junction, "cp")
        ds = np.asarray(grid.detunings)
        argmax_cold = abs(ds[int(np.argmax(surface.values[0]))])
        argmax_hot = abs(ds[int(np.argmax(surface.values[1]))])
        assert argmax_hot < argmax_cold

    def test_cp_rate_decays_with_temperature_near_pair_peak(self, junction):
        grid = SpectralGrid(
            detunings=(-2.0, 0.0, 2.0),
            temperatures=(0.7, 0.8, 0.9, 0.95),
            k_integration=KQuadrature(nodes=1024),
        )
        surface = rate_surface(grid, junction, "cp")
        col = surface.values[:, 2]
        assert all(a > b for a, b in zip(col, col[1:]))


class TestPerBandGapOverride:
    def test_unity_scales_match_default(self, junction, fast_quad):
        scaled = gaas_nb_junction(gap_scale_conduction=1.0, gap_scale_valence=1.0)
        assert s_cp(2.0, 0.3, scaled, fast_quad) == s_cp(2.0, 0.3, junction, fast_quad)

    def test_pair_peak_tracks_sum_of_band_gaps(self):
        jp = gaas_nb_junction(gap_scale_valence=0.5)
        quad = KQuadrature(nodes=2048)
        ds = np.linspace(0.5, 3.0, 126)
        vals = [s_cp(d, 0.1, jp, quad) for d in ds]
        peak = ds[int(np.argmax(vals))]
        assert peak == pytest.approx(1.5, abs=0.06)


class TestBroadening:
    @staticmethod
    def _fwhm(jp, quad):
        ds = np.linspace(0.5, 3.5, 301)
        vals = np.array([s_cp(d, 0.1, jp, quad) for d in ds])
        half = vals.max() / 2.0
        above = ds[vals >= half]
        return above[-1] - above[0]

    def test_longer_dephasing_sharpens_peak(self):
        quad = KQuadrature(nodes=2048)
        width_base = self._fwhm(gaas_nb_junction(dephasing_time=1000.0), quad)
        width_sharp = self._fwhm(gaas_nb_junction(dephasing_time=2000.0), quad)
        assert width_sharp < width_base


class TestMixingRates:
    def test_enhancement_scales_only_coherent_channel(self, junction, fast_quad):
        r_cp_1, r_bqp_1 = mixing_rates(5.0, 0.5, junction, CoherenceParams(50.0), fast_quad)
        r_cp_2, r_bqp_2 = mixing_rates(5.0, 0.5, junction, CoherenceParams(100.0), fast_quad)
        assert r_cp_2 == 2.0 * r_cp_1
        assert r_bqp_2 == r_bqp_1

    def test_coherent_share_monotone_in_enhancement(self, junction, fast_quad):
        shares = []
        for enh in (1.0, 10.0, 100.0, 1000.0):
            r_cp, r_bqp = mixing_rates(5.0, 0.5, junction, CoherenceParams(enh), fast_quad)
            shares.append(r_cp / (r_cp + r_bqp))
        assert all(a < b for a, b in zip(shares, shares[1:]))

    def test_both_rates_positive(self, junction, fast_quad):
        r_cp, r_bqp = mixing_rates(5.0, 0.3, junction, CoherenceParams(100.0), fast_quad)
        assert r_cp > 0 and r_bqp > 0
