"""Tests for spectrum estimation and dispersion metrics."""

import math

import numpy as np
import pytest

from aoasim.estimation import (
    AngularSpectrum,
    average_spectra,
    estimate_pdf,
    lse,
    rms_angle_spread,
    rms_angle_spread_paths,
)
from aoasim.montecarlo import PathSample, PathSet

TWO_PI = 2 * math.pi


def _path_set(entries, digest="test", seed=0):
    paths = tuple(
        PathSample(tap, float(angle), float(power), bool(direct))
        for tap, angle, power, direct in entries
    )
    return PathSet(paths, digest, seed)


def _uniform_spectrum(bins=360):
    edges = np.linspace(-math.pi, math.pi, bins + 1)
    density = np.full(bins, 1.0 / TWO_PI)
    return AngularSpectrum(edges, density, 0.0, bins)


class TestEstimatePdf:
    def test_point_concentration(self):
        paths = _path_set([(0, 0.0, 1.0, False)] * 10)
        spectrum = estimate_pdf(paths, 36)
        probs = spectrum.probabilities
        nonzero = np.nonzero(probs)[0]
        assert nonzero.size == 1
        assert probs[nonzero[0]] == pytest.approx(1.0, rel=1e-14)
        lo, hi = spectrum.bin_edges[nonzero[0]], spectrum.bin_edges[nonzero[0] + 1]
        assert lo <= 0.0 < hi

    def test_uniform_bin_center_construction(self):
        bins = 36
        edges = np.linspace(-math.pi, math.pi, bins + 1)
        centers = 0.5 * (edges[:-1] + edges[1:])
        paths = _path_set([(0, c, 1.0, False) for c in centers])
        spectrum = estimate_pdf(paths, bins)
        assert np.all(np.abs(spectrum.density - 1.0 / TWO_PI) < 1e-12)

    def test_power_weighting(self):
        paths = _path_set([(0, -1.0, 1.0, False), (0, 1.0, 3.0, False)])
        spectrum = estimate_pdf(paths, 36)
        probs = np.sort(spectrum.probabilities[np.nonzero(spectrum.probabilities)])
        assert probs == pytest.approx([0.25, 0.75])

    def test_direct_power_becomes_point_mass(self):
        paths = _path_set([(0, 0.5, 1.0, False), (0, 0.0, 1.0, True)])
        spectrum = estimate_pdf(paths, 36)
        assert spectrum.point_mass_at_zero == pytest.approx(0.5)
        assert np.sum(spectrum.probabilities) == pytest.approx(0.5)

    def test_positive_pi_lands_in_last_bin(self):
        paths = _path_set([(0, math.pi, 1.0, False)])
        spectrum = estimate_pdf(paths, 36)
        assert spectrum.probabilities[-1] == pytest.approx(1.0)

    def test_normalization_invariant(self):
        rng = np.random.default_rng(30)
        for _ in range(200):
            n = rng.integers(1, 200)
            entries = [
                (0, rng.uniform(-math.pi, math.pi), rng.uniform(0, 2), False)
                for _ in range(n)
            ]
            if rng.random() < 0.5:
                entries.append((0, 0.0, rng.uniform(0, 1), True))
            spectrum = estimate_pdf(_path_set(entries), int(rng.integers(8, 720)))
            assert spectrum.normalization_defect() <= 1e-9

    def test_empty_path_set_rejected(self):
        with pytest.raises(ValueError):
            estimate_pdf(_path_set([]), 36)

    def test_small_bin_count_rejected(self):
        with pytest.raises(ValueError):
            estimate_pdf(_path_set([(0, 0.0, 1.0, False)]), 7)


class TestAverageSpectra:
    def test_single_identity(self):
        s = _uniform_spectrum()
        out = average_spectra([s])
        assert np.array_equal(out.density, s.density)
        assert out.point_mass_at_zero == s.point_mass_at_zero

    def test_self_average_identity(self):
        paths = _path_set([(0, 0.3, 1.0, False), (0, -0.7, 2.0, False)])
        s = estimate_pdf(paths, 72)
        out = average_spectra([s, s])
        assert np.array_equal(out.density, s.density)

    def test_two_point_split(self):
        a = _path_set([(0, -1.0, 1.0, False)])
        b = _path_set([(0, 1.0, 1.0, False)])
        out = average_spectra([estimate_pdf(a, 36), estimate_pdf(b, 36)])
        probs = np.sort(out.probabilities[np.nonzero(out.probabilities)])
        assert probs == pytest.approx([0.5, 0.5])

    def test_mismatched_bins_rejected(self):
        with pytest.raises(ValueError):
            average_spectra([_uniform_spectrum(36), _uniform_spectrum(72)])

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            average_spectra([])

    def test_preserves_normalization(self):
        rng = np.random.default_rng(31)
        spectra = []
        for _ in range(50):
            entries = [
                (0, rng.uniform(-math.pi, math.pi), rng.uniform(0, 2), False)
                for _ in range(rng.integers(1, 50))
            ]
            spectra.append(estimate_pdf(_path_set(entries), 90))
        out = average_spectra(spectra)
        assert out.normalization_defect() <= 1e-9


class TestRmsAngleSpread:
    def test_point_mass_has_zero_spread(self):
        paths = _path_set([(0, 0.7, p, False) for p in (1.0, 2.0, 0.5)])
        spectrum = estimate_pdf(paths, 360)
        assert rms_angle_spread(spectrum) == 0.0

    def test_direct_only_point_mass(self):
        paths = _path_set([(0, 0.0, 1.0, True), (0, 1.3, 1e-12, False)])
        spectrum = estimate_pdf(paths, 360)
        assert rms_angle_spread(spectrum) == pytest.approx(0.0, abs=1e-5)

    def test_uniform_limit(self):
        # analytic std of a uniform distribution over a 2 pi interval
        expected = math.pi / math.sqrt(3.0)
        value = rms_angle_spread(_uniform_spectrum(360))
        assert value == pytest.approx(expected, rel=0.005)
        assert math.degrees(expected) == pytest.approx(103.92, abs=0.01)

    def test_symmetric_two_point_mass(self):
        x = 1.1
        bins = 360
        paths = _path_set([(0, -x, 1.0, False), (0, x, 1.0, False)])
        spectrum = estimate_pdf(paths, bins)
        assert rms_angle_spread(spectrum) == pytest.approx(x, abs=TWO_PI / bins)

    def test_scale_invariance(self):
        entries = [(0, 0.4, 1.0, False), (0, -0.9, 2.5, False), (0, 2.0, 0.3, False)]
        scaled = [(t, a, 7.3 * p, d) for t, a, p, d in entries]
        s1 = rms_angle_spread(estimate_pdf(_path_set(entries), 180))
        s2 = rms_angle_spread(estimate_pdf(_path_set(scaled), 180))
        assert s1 == pytest.approx(s2, rel=1e-12)

    def test_unnormalized_rejected(self):
        edges = np.linspace(-math.pi, math.pi, 37)
        density = np.full(36, 1.0 / TWO_PI)
        broken = AngularSpectrum(edges, density, 0.5, 10)
        with pytest.raises(ValueError):
            rms_angle_spread(broken)

    def test_even_spectrum_mean_vanishes(self):
        x = 0.8
        paths = _path_set([(0, -x, 2.0, False), (0, x, 2.0, False), (0, 0.0, 1.0, False)])
        spectrum = estimate_pdf(paths, 360)
        mirrored = AngularSpectrum(
            spectrum.bin_edges, spectrum.density[::-1].copy(),
            spectrum.point_mass_at_zero, spectrum.sample_count,
        )
        assert rms_angle_spread(spectrum) == pytest.approx(rms_angle_spread(mirrored), rel=1e-9)


class TestRawPathSpread:
    def test_matches_binned_in_the_fine_limit(self):
        rng = np.random.default_rng(32)
        entries = [
            (0, rng.uniform(-3, 3), rng.uniform(0.1, 1.0), False) for _ in range(500)
        ]
        paths = _path_set(entries)
        binned = rms_angle_spread(estimate_pdf(paths, 5760))
        raw = rms_angle_spread_paths(paths)
        assert binned == pytest.approx(raw, abs=2e-3)

    def test_direct_path_pulls_spread_down(self):
        spread_without = rms_angle_spread_paths(_path_set([(1, 1.0, 1.0, False)]))
        spread_with = rms_angle_spread_paths(
            _path_set([(1, 1.0, 1.0, False), (0, 0.0, 1.0, True)])
        )
        assert spread_without == 0.0
        assert spread_with == pytest.approx(0.5, rel=1e-12)


class TestPooledVersusAveraged:
    def test_pooled_estimate_converges_to_trial_mean(self):
        # Averaging per-trial spectra and estimating once over the pooled
        # paths differ only through per-trial total-power fluctuations,
        # which wash out as the trial count grows.
        from aoasim.angular import GaussianPattern, Tap, TapProfile
        from aoasim.montecarlo import generate_trial
        from aoasim.scenario import ScenarioConfig

        config = ScenarioConfig(
            distance=1000.0,
            taps=TapProfile((Tap(0.0, 0.5, 10), Tap(2e-6, 0.5, 10))),
            pattern=GaussianPattern(math.radians(180.0)),
            kappa=0.0,
            mu=3.0,
            trials=1,
            bins=72,
            master_seed=123,
        )
        trials = 10_000
        all_paths = []
        spectra = []
        for index in range(trials):
            paths = generate_trial(config, index)
            all_paths.extend(paths.paths)
            spectra.append(estimate_pdf(paths, config.bins))
        averaged = average_spectra(spectra)
        pooled = estimate_pdf(PathSet(tuple(all_paths), "pooled", 0), config.bins)
        scale = averaged.density.max()
        assert np.max(np.abs(pooled.density - averaged.density)) <= 0.01 * scale


class TestLse:
    def test_zero_for_perfect_model(self):
        spectrum = _uniform_spectrum(36)
        empirical = [(float(c), 1.0 / TWO_PI) for c in spectrum.bin_centers]
        assert lse(spectrum, empirical) == 0.0

    def test_constant_offset(self):
        offset = 0.01
        k = 25
        angles = np.linspace(-3, 3, k)
        empirical = [(float(a), 1.0 / TWO_PI + offset) for a in angles]
        value = lse(_uniform_spectrum(36), empirical)
        assert value == pytest.approx(k * offset ** 2, rel=1e-12)

    def test_callable_model(self):
        empirical = [(0.0, 0.2), (1.0, 0.1)]
        value = lse(lambda x: 0.2 if x == 0.0 else 0.3, empirical)
        assert value == pytest.approx(0.04, rel=1e-12)

    def test_angle_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            lse(_uniform_spectrum(36), [(4.0, 0.1)])

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            lse(_uniform_spectrum(36), [])


class TestAngularSpectrumType:
    def test_edges_must_span_circle(self):
        with pytest.raises(ValueError):
            AngularSpectrum(np.linspace(-1, 1, 37), np.full(36, 1.0), 0.0, 1)

    def test_density_must_be_nonnegative(self):
        edges = np.linspace(-math.pi, math.pi, 37)
        density = np.full(36, 1.0 / TWO_PI)
        density[3] = -0.1
        with pytest.raises(ValueError):
            AngularSpectrum(edges, density, 0.0, 1)

    def test_density_at_lookup(self):
        spectrum = _uniform_spectrum(8)
        assert spectrum.density_at(0.1) == pytest.approx(1.0 / TWO_PI)
        assert spectrum.density_at(math.pi) == pytest.approx(1.0 / TWO_PI)
        arr = spectrum.density_at(np.array([0.5, -0.5]))
        assert arr.shape == (2,)
        with pytest.raises(ValueError):
            spectrum.density_at(-math.pi)
