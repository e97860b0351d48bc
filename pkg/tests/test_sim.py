import numpy as np
import pytest
from scipy.special import erf
from scipy.stats import ks_2samp

from evfocus.epr import bin_events
from evfocus.events import EventStream, Roi, validate
from evfocus.sim import (
    EventGenConfig,
    NoiseConfig,
    OpticsConfig,
    Scene,
    SweepConfig,
    blur_radius,
    digits,
    gaussian_blur,
    gaussian_kernel,
    inject_noise,
    load_pgm_scene,
    log_image,
    make_pattern,
    read_pgm,
    simulate_sweep,
    threshold_events,
    write_pgm,
)
from evfocus.sim.scenes import bars, checker, step_edge

from conftest import SMALL, edge_sweep, f14_optics, window


def per_pixel(stream, pol, shape=(12, 16)):
    m = np.zeros(shape, dtype=np.int64)
    sel = stream.p == pol
    np.add.at(m, (stream.y[sel], stream.x[sel]), 1)
    return m


class TestOptics:
    def test_blur_radius(self):
        assert blur_radius(0.0, 35_000, 25_000) == 0
        assert blur_radius(60.0, 35_000, 25_000) == pytest.approx(60 * 25_000 / 70_000)
        assert blur_radius(60.0, 35_000, 25_000) == pytest.approx(21.43, abs=5e-3)
        assert blur_radius(-17.0, 35_000, 25_000) == blur_radius(17.0, 35_000, 25_000)

    def test_blur_radius_bad_v0(self):
        with pytest.raises(ValueError):
            blur_radius(1.0, 0.0, 25_000)

    def test_thin_lens(self):
        o = OpticsConfig(f=35_000, u=1_000_000)
        assert o.v0 == pytest.approx(1 / (1 / 35_000 - 1 / 1_000_000), rel=1e-12)
        with pytest.raises(ValueError):
            OpticsConfig(f=35_000, u=1_000_000, v0=35_000)
        with pytest.raises(ValueError):
            OpticsConfig(f=35_000, u=30_000)

    def test_f_number(self):
        assert f14_optics().D == pytest.approx(25_000)

    @pytest.mark.parametrize("a", [0.3, 1.0, 2.5, 7.0])
    def test_kernel_unit_sum(self, a):
        k = gaussian_kernel(a)
        assert len(k) == 2 * int(np.ceil(4 * a)) + 1
        assert k.sum() == pytest.approx(1.0, abs=1e-14)
        np.testing.assert_array_equal(k, k[::-1])

    def test_zero_blur_identity(self, rng):
        img = rng.random((10, 12)) + 0.1
        np.testing.assert_array_equal(gaussian_blur(img, 0.0), img)

    def test_uniform_preserved(self):
        out = gaussian_blur(np.full((20, 30), 0.37), 3.3)
        assert np.abs(out - 0.37).max() <= 1e-10

    def test_step_matches_erf(self):
        img = np.zeros((16, 64))
        img[:, 32:] = 1.0
        row = gaussian_blur(img, 2.0)[8]
        # pixel x covers [x, x + 1); the edge sits at x = 32
        x = np.arange(64) + 0.5
        expect = 0.5 * (1 + erf((x - 32) / (2.0 * np.sqrt(2))))
        assert np.abs(row - expect).max() <= 1e-3

    def test_negative_width(self):
        with pytest.raises(ValueError):
            gaussian_blur(np.ones((8, 8)), -1.0)


class TestScenes:
    def test_strictly_positive(self):
        img = np.ones((8, 8))
        img[3, 3] = 0.0
        with pytest.raises(ValueError, match="log undefined"):
            Scene(img)

    @pytest.mark.parametrize("shape", [(7, 8), (8, 7), (8,)])
    def test_shape(self, shape):
        with pytest.raises(ValueError):
            Scene(np.ones(shape))

    @pytest.mark.parametrize("name", ["step", "bars", "checker", "digits", "uniform"])
    def test_patterns(self, name):
        s = make_pattern(name, 32, 24)
        assert (s.width, s.height) == (32, 24)
        assert (s.intensity > 0).all()

    def test_unknown_pattern(self):
        with pytest.raises(ValueError, match="unknown pattern"):
            make_pattern("stars")

    def test_digits(self):
        one = digits("1", 20, 20)
        eight = digits("8", 20, 20)
        assert (one.intensity == 1.0).sum() < (eight.intensity == 1.0).sum()
        # every lit pixel of "1" is also lit in "8"
        assert (eight.intensity[one.intensity == 1.0] == 1.0).all()
        with pytest.raises(ValueError, match="no glyph"):
            digits("x")

    def test_pgm_round_trip(self, tmp_path, rng):
        pix = rng.integers(0, 256, (9, 11))
        write_pgm(tmp_path / "a.pgm", pix)
        back, maxval = read_pgm(tmp_path / "a.pgm")
        np.testing.assert_array_equal(back, pix)
        assert maxval == 255
        scene = load_pgm_scene(tmp_path / "a.pgm")
        np.testing.assert_allclose(scene.intensity, (pix + 1) / 256)

    def test_pgm_16bit_and_comment(self, tmp_path):
        pix = np.arange(80).reshape(8, 10) * 800
        (tmp_path / "b.pgm").write_bytes(b"P5\n# made by hand\n10 8\n65535\n" + pix.astype(">u2").tobytes())
        back, maxval = read_pgm(tmp_path / "b.pgm")
        np.testing.assert_array_equal(back, pix)
        assert maxval == 65535

    def test_pgm_truncated(self, tmp_path):
        (tmp_path / "c.pgm").write_bytes(b"P5\n10 8\n255\n" + bytes(50))
        with pytest.raises(ValueError, match="truncated"):
            read_pgm(tmp_path / "c.pgm")

    def test_pgm_magic(self, tmp_path):
        (tmp_path / "d.pgm").write_bytes(b"P2\n2 2\n255\n1 2 3 4\n")
        with pytest.raises(ValueError, match="not a binary PGM"):
            read_pgm(tmp_path / "d.pgm")


class TestThreshold:
    def test_exact_multiple_is_strict(self):
        n_pos, n_neg, ref = threshold_events(np.zeros(3), np.array([0.4, 0.41, -0.61]), EventGenConfig())
        np.testing.assert_array_equal(n_pos, [1, 2, 0])
        np.testing.assert_array_equal(n_neg, [0, 0, 3])
        np.testing.assert_allclose(ref, [0.2, 0.4, -0.6])

    def test_snap(self):
        _, _, ref = threshold_events(np.zeros(2), np.array([0.5, 0.1]), EventGenConfig(residual="snap"))
        np.testing.assert_array_equal(ref, [0.5, 0.0])

    def test_config_validation(self):
        with pytest.raises(ValueError):
            EventGenConfig(c_pos=0)
        with pytest.raises(ValueError):
            EventGenConfig(residual="reset")
        with pytest.raises(ValueError):
            NoiseConfig(dark_rate_hz=-1)
        with pytest.raises(ValueError):
            SweepConfig(10, 10)
        with pytest.raises(ValueError):
            SweepConfig(steps=2)


class TestSimulateSweep:
    def test_uniform_scene_silent(self):
        stream, gt = simulate_sweep(make_pattern("uniform"), f14_optics(), edge_sweep())
        assert len(stream) == 0 and gt == 30_000

    def test_ground_truth_kinematics(self):
        sweep = SweepConfig(-200, 400, 5_000, 61, t_start=1_000)
        assert sweep.ground_truth_time == 1_000 + 200 / 5_000 * 1e6
        assert sweep.position_at(sweep.ground_truth_time) == pytest.approx(0.0)
        assert sweep.duration_us == pytest.approx(120_000)

    def test_stream_is_valid(self, step_run):
        _, stream, gt = step_run
        assert validate(stream) == []
        assert gt == 30_000
        assert stream.n_positive > 0 and stream.n_negative > 0

    def test_log_symmetry(self):
        o, sweep = f14_optics(), edge_sweep()
        scene = checker(32, 24, cell=3)
        dv = sweep.defocus
        for j in (0, 50, 200, 299):
            plus = log_image(scene, float(o.blur_sigma_px(dv[j])))
            minus = log_image(scene, float(o.blur_sigma_px(dv[-1 - j])))
            assert np.abs(plus - minus).max() <= 1e-10

    def test_epr_mirror_about_truth(self, step_seq):
        # truth (30 ms) sits at bin coordinate 29.5; find the centre c where per[c + m] best matches ner[c - m]
        n = step_seq.n
        best, centre = np.inf, None
        for c2 in range(40, 80):
            i = np.arange(n)
            j = c2 - i
            ok = (j >= 0) & (j < n)
            r = np.abs(step_seq.per[i[ok]] - step_seq.ner[j[ok]]).sum() / ok.sum()
            if r < best:
                best, centre = r, c2 / 2
        assert abs(centre - 29.5) <= 1

    @pytest.mark.parametrize("scene", [step_edge(16, 12), bars(16, 12, period=4), checker(16, 12, cell=3)])
    def test_threshold_halving(self, scene):
        sweep = edge_sweep()
        full = len(simulate_sweep(scene, f14_optics(), sweep).stream)
        half = len(simulate_sweep(scene, f14_optics(), sweep, EventGenConfig(0.1, 0.1)).stream)
        assert 2 * full <= half <= 2 * full + scene.width * scene.height * sweep.steps

    @pytest.mark.parametrize("scene", [step_edge(16, 12), checker(16, 12, cell=3, seed=4)])
    def test_reversal_antisymmetry(self, scene):
        fwd_sweep = SweepConfig(-300, 150, 10_000, 451)
        rev_sweep = SweepConfig(150, -300, 10_000, 451)
        fwd = simulate_sweep(scene, f14_optics(), fwd_sweep).stream
        rev = simulate_sweep(scene, f14_optics(), rev_sweep).stream
        # same pixels, opposite polarity; each monotone run of a pixel's log level
        # quantises on its own threshold lattice, worth at most one event per run
        assert np.abs(per_pixel(fwd, 1) - per_pixel(rev, -1)).max() <= 2
        assert np.abs(per_pixel(fwd, -1) - per_pixel(rev, 1)).max() <= 2
        assert abs(fwd.n_positive - rev.n_negative) <= 0.05 * fwd.n_positive
        # the lattice is anchored at the first frame, so individual events move by a
        # few steps; the mirrored time distributions still coincide
        T = fwd_sweep.step_times[-1]
        for pol in (1, -1):
            assert ks_2samp(T - fwd.t[fwd.p == pol], rev.t[rev.p == -pol]).statistic <= 0.15
        assert ks_2samp(T - fwd.t[fwd.p == 1], rev.t[rev.p == 1]).statistic > 0.5

    def test_roi(self):
        roi = Roi(2, 3, 5, 4)
        stream, _ = simulate_sweep(step_edge(16, 12, edge=4), f14_optics(), edge_sweep(), roi=roi)
        assert len(stream) > 0
        assert roi.contains(stream.x, stream.y).all()

    def test_scene_change(self):
        sweep = edge_sweep()
        a, b = digits("59", 32, 24), digits("50", 32, 24)
        plain = simulate_sweep(a, f14_optics(), sweep).stream
        jump = simulate_sweep(a, f14_optics(), sweep, scene_changes=[(18_000, b)]).stream
        early = plain.t < 18_000
        assert (jump.t[: early.sum()] == plain.t[early]).all()
        assert len(jump) != len(plain)
        with pytest.raises(ValueError, match="sensor size"):
            simulate_sweep(a, f14_optics(), sweep, scene_changes=[(0, digits("1", 20, 20))])

    def test_deterministic(self):
        a = simulate_sweep(make_pattern("checker", 16, 12), f14_optics(), edge_sweep()).stream
        b = simulate_sweep(make_pattern("checker", 16, 12), f14_optics(), edge_sweep()).stream
        assert a == b


class TestNoise:
    def test_inactive_is_identity(self, small_stream):
        assert inject_noise(small_stream, EventGenConfig(), (0, 100)) is small_stream

    def test_dark_rate(self):
        sensor_stream = EventStream.empty(type(SMALL)(10, 10))
        gen = EventGenConfig(noise=NoiseConfig(dark_rate_hz=100.0, seed=3))
        out = inject_noise(sensor_stream, gen, (0, 1_000_000))
        assert abs(len(out) - 10_000) <= 3 * 100
        assert validate(out) == []
        assert abs(out.n_positive - out.n_negative) <= 3 * 100

    def test_seeded(self, small_stream):
        gen = EventGenConfig(noise=NoiseConfig(dark_rate_hz=50.0, aps_period_s=0.01, aps_amplitude=5, seed=9))
        a = inject_noise(small_stream, gen, (0, 100_000))
        assert a == inject_noise(small_stream, gen, (0, 100_000))
        assert a != inject_noise(small_stream, gen, (0, 100_000), seed=10)

    def test_aps_bursts(self):
        empty = EventStream.empty(SMALL)
        gen = EventGenConfig(noise=NoiseConfig(aps_period_s=0.01, aps_amplitude=7))
        out = inject_noise(empty, gen, (0, 50_000))
        stamps, counts = np.unique(out.t, return_counts=True)
        np.testing.assert_array_equal(stamps, [10_000, 20_000, 30_000, 40_000])
        assert (counts == 7).all()

    def test_strobe_comb(self):
        empty = EventStream.empty(SMALL)
        gen = EventGenConfig(noise=NoiseConfig(strobe_freq_hz=20.0, strobe_log_depth=0.45))
        out = inject_noise(empty, gen, (0, 200_000))
        seq = bin_events(out, None, 1000, 0, 200_000)
        on = np.flatnonzero(seq.per)
        off = np.flatnonzero(seq.ner)
        np.testing.assert_array_equal(on, [25, 75, 125, 175])
        np.testing.assert_array_equal(off, [50, 100, 150])
        # first rising edge crosses two thresholds, later ones one
        assert seq.per[25] == 2 * SMALL.n_pixels and seq.per[75] == SMALL.n_pixels

    def test_strobe_below_threshold(self):
        empty = EventStream.empty(SMALL)
        gen = EventGenConfig(noise=NoiseConfig(strobe_freq_hz=20.0, strobe_log_depth=0.15))
        assert len(inject_noise(empty, gen, (0, 200_000))) == 0

    def test_noise_sorted_after_clean(self, small_stream):
        gen = EventGenConfig(noise=NoiseConfig(aps_period_s=0.00001, aps_amplitude=1))
        out = inject_noise(small_stream, gen, (0, 41))
        assert validate(out) == []
        assert out[1] == small_stream[1]

    def test_empty_window(self, small_stream):
        gen = EventGenConfig(noise=NoiseConfig(dark_rate_hz=1.0))
        with pytest.raises(ValueError, match="empty noise window"):
            inject_noise(small_stream, gen, (10, 10))

    def test_window_helper(self):
        assert window(edge_sweep()) == (0, 60_001)
