import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from evfocus.wavelet import (
    DenoiseSpec,
    WaveletFilterPair,
    available,
    dwt,
    dwt_multilevel,
    effective_levels,
    get_filter,
    idwt,
    lowpass_reconstruct,
    max_level,
    reconstruction_error,
    waverec,
)

FS = 1000.0
DMEY = DenoiseSpec.named("dmey", 6)


def mixture(n):
    t = np.arange(n) / FS
    bump = np.exp(-0.5 * ((t - t.mean()) / 0.08) ** 2)
    return bump, bump + 0.5 * np.sin(2 * np.pi * 40 * t)


def rel_l2(a, b):
    return np.linalg.norm(a - b) / np.linalg.norm(b)


class TestFilters:
    def test_bundled(self):
        assert {"dmey", "sym4"} <= set(available())
        assert get_filter("dmey").length == 62
        assert get_filter("sym4").length == 8

    def test_unknown(self):
        with pytest.raises(ValueError, match="unknown wavelet"):
            get_filter("haar7")

    @pytest.mark.parametrize("name", ["dmey", "sym4"])
    def test_orthonormal_bank(self, name):
        f = get_filter(name)
        assert reconstruction_error(f) < 1e-12
        assert f.dec_lo.sum() == pytest.approx(np.sqrt(2), abs=1e-12)
        assert np.dot(f.dec_lo, f.dec_lo) == pytest.approx(1.0, abs=1e-12)

    def test_rejects_non_reconstructing_bank(self):
        f = get_filter("sym4")
        with pytest.raises(ValueError, match="reconstruction error"):
            WaveletFilterPair("bad", f.dec_lo * 1.01, f.dec_hi, f.rec_lo, f.rec_hi)

    def test_dmey_close_to_toolbox_taps(self):
        pywt = pytest.importorskip("pywt")
        ref = np.array(pywt.Wavelet("dmey").dec_lo)
        assert np.abs(get_filter("dmey").dec_lo - ref).max() < 1e-3

    def test_sym4_matches_toolbox(self):
        pywt = pytest.importorskip("pywt")
        np.testing.assert_allclose(get_filter("sym4").dec_lo, pywt.Wavelet("sym4").dec_lo, atol=1e-15)


class TestLevels:
    def test_max_level(self):
        assert max_level(4096, 62) == 6
        assert max_level(3904, 62) == 6
        assert max_level(3903, 62) == 5
        assert max_level(243, 62) == 1
        assert max_level(10, 62) == 1

    def test_clamp_recorded(self):
        pyr = dwt_multilevel(np.ones(243), DMEY)
        assert pyr.levels == 1 and pyr.clamped
        assert not dwt_multilevel(np.ones(4096), DMEY).clamped

    def test_coefficient_lengths(self):
        L = 62
        pyr = dwt_multilevel(np.arange(4096.0), DMEY)
        n, expect = 4096, []
        for _ in range(6):
            n = (n + L - 1) // 2
            expect.append(n)
        assert [len(d) for d in pyr.details] == expect[::-1]
        assert len(pyr.approx) == expect[-1]

    def test_short_signal(self):
        with pytest.raises(ValueError):
            dwt_multilevel([1.0], DMEY)
        with pytest.raises(ValueError):
            DenoiseSpec(get_filter("dmey"), levels=0)


class TestTransform:
    def test_constant_has_no_detail(self):
        pyr = dwt_multilevel(np.full(4096, 3.5), DMEY)
        assert max(np.abs(d).max() for d in pyr.details) <= 1e-9

    def test_constant_passes_lowpass(self):
        np.testing.assert_allclose(lowpass_reconstruct(np.full(1000, 2.0), DMEY), 2.0, atol=1e-8)

    def test_impulse_one_level(self):
        x = np.zeros(128)
        x[40] = 1.0
        a, d = dwt(x, get_filter("dmey"))
        np.testing.assert_allclose(idwt(a, d, get_filter("dmey"))[:128], x, atol=1e-8)

    @pytest.mark.parametrize("n", [64, 65, 100, 243, 1000, 2047, 4096])
    def test_perfect_reconstruction(self, n, rng):
        x = rng.normal(size=n)
        for spec in (DMEY, DenoiseSpec.named("sym4", 6)):
            assert rel_l2(waverec(dwt_multilevel(x, spec), spec.filter), x) <= 1e-8

    @settings(max_examples=30, deadline=None)
    @given(st.integers(64, 4096), st.integers(0, 2**32 - 1))
    def test_perfect_reconstruction_property(self, n, seed):
        x = np.random.default_rng(seed).normal(size=n)
        assert rel_l2(waverec(dwt_multilevel(x, DMEY), DMEY.filter), x) <= 1e-8

    @settings(max_examples=30, deadline=None)
    @given(st.integers(64, 2048), st.floats(-5, 5), st.floats(-5, 5), st.integers(0, 2**32 - 1))
    def test_linearity(self, n, a, b, seed):
        g = np.random.default_rng(seed)
        x, y = g.normal(size=n), g.normal(size=n)
        lhs = lowpass_reconstruct(a * x + b * y, DMEY)
        rhs = a * lowpass_reconstruct(x, DMEY) + b * lowpass_reconstruct(y, DMEY)
        assert np.linalg.norm(lhs - rhs) <= 1e-8 * max(np.linalg.norm(rhs), 1e-300) + 1e-12

    @settings(max_examples=30, deadline=None)
    @given(st.integers(64, 4096), st.integers(0, 2**32 - 1))
    def test_energy_does_not_grow(self, n, seed):
        x = np.random.default_rng(seed).normal(size=n)
        y = lowpass_reconstruct(x, DMEY)
        assert np.linalg.norm(y) <= np.linalg.norm(x) * (1 + 1e-8)


class TestDenoising:
    def test_40hz_attenuated(self):
        t = np.arange(4096) / FS
        x = np.sin(2 * np.pi * 40 * t)
        y = lowpass_reconstruct(x, DMEY)
        assert effective_levels(4096, DMEY) == 6
        assert np.sqrt(np.mean(y**2)) <= 0.05 * np.sqrt(np.mean(x**2))

    def test_bump_recovered(self):
        bump, x = mixture(4096)
        assert np.corrcoef(lowpass_reconstruct(x, DMEY), bump)[0, 1] >= 0.99

    def test_short_mixture_is_clamped(self):
        # 300 samples only allow two dmey levels: 40 Hz sits inside that band
        bump, x = mixture(300)
        assert effective_levels(300, DMEY) == 2
        assert np.corrcoef(lowpass_reconstruct(x, DMEY), bump)[0, 1] < 0.99

    def test_frozen_reference_vectors(self):
        # cA2-only reconstruction of the 300-sample mixture, computed once with
        # PyWavelets (symmetric mode) on the bundled dmey bank
        _, x = mixture(300)
        y = lowpass_reconstruct(x, DMEY)
        expect = [0.24225368455847904, 0.43478140909008617, 1.0000685409581598,
                  0.9280956631101239, -0.005642850390986985]
        np.testing.assert_allclose(y[[0, 37, 150, 211, 299]], expect, atol=1e-12)

    @pytest.mark.parametrize("n", [300, 1000, 4096])
    def test_matches_reference_implementation(self, n):
        pywt = pytest.importorskip("pywt")
        f = DMEY.filter
        w = pywt.Wavelet("bundled", filter_bank=[f.dec_lo, f.dec_hi, f.rec_lo, f.rec_hi])
        _, x = mixture(n)
        lv = effective_levels(n, DMEY)
        coeffs = pywt.wavedec(x, w, level=lv, mode="symmetric")
        ours = dwt_multilevel(x, DMEY)
        np.testing.assert_allclose(ours.approx, coeffs[0], atol=1e-12)
        for a, b in zip(ours.details, coeffs[1:]):
            np.testing.assert_allclose(a, b, atol=1e-12)
        ref = pywt.waverec([coeffs[0]] + [np.zeros_like(c) for c in coeffs[1:]], w, mode="symmetric")[:n]
        assert np.sqrt(np.mean((lowpass_reconstruct(x, DMEY) - ref) ** 2)) <= 1e-6
