import json
import math
import os
import sys

import numpy as np
import pytest

test_path = os.path.dirname(os.path.abspath(__file__))
modules_path = os.path.dirname(test_path)
sys.path.insert(0, modules_path)

from utilities_common.exception import FitError, GridMismatchError
from signal_model.fourier import Spectrum
from multilinear_core.simplex import t_infinity
from spectral_tools.correlation import autocorrelation, correlation_spectrum, correlation_transform
from spectral_tools.fit import (
    consistent_sign, fit_inverse_law, fit_log_growth, fit_ratio, inverse_law_window, quadratic_envelope
)
from spectral_tools.lorentz import weak_l2_quasinorm
from spectral_tools.report import Report
from spectral_tools.riesz import riesz_minus_grid, riesz_plus_grid


def packet(ks, carrier):
    return np.exp(-ks ** 2 / 2.0) * np.exp(1j * carrier * ks)


class TestReport(object):
    @classmethod
    def setup_class(cls):
        print("SETUP")

    def test_pass_and_fail(self):
        report = Report().check('a', 1e-9, 1e-8).check('b', 2e-8, 1e-8)
        assert not report.passed
        assert [item.check for item in report.failures] == ['b']
        assert report.worst.check == 'b'
        assert report.max_error == 2e-8
        assert report.tolerance == 1e-8

    def test_nan_never_passes(self):
        report = Report().fail('resolution', 'dx too large')
        assert not report.passed
        assert math.isnan(report.max_error)
        assert report.items[0].detail == 'dx too large'

    def test_empty_report_does_not_pass(self):
        assert not Report().passed
        assert Report().worst is None

    def test_extend_with_prefix(self):
        inner = Report().check('det', 0.0, 1e-8)
        outer = Report().extend(inner, 'transfer')
        assert outer.items[0].check == 'transfer/det'
        assert outer.passed

    def test_table(self):
        table = Report().check('det', 1.0, 1e-8, 'block 20').table()
        assert 'FAILED' in table
        assert 'block 20' in table
        assert table.splitlines()[0].split() == ['Check', 'Status', 'Max', 'error', 'Tolerance', 'Detail']


class TestCorrelation(object):
    @classmethod
    def setup_class(cls):
        print("SETUP")

    def test_lags_end_at_zero(self, toy):
        lags, h = autocorrelation(toy)
        assert lags[-1] == 0.0
        assert lags.size % 2 == 1
        assert h[-1] == pytest.approx(toy.l2_norm_sq(), rel=1e-6)

    @pytest.mark.parametrize('k', [0.5, 1.3, 4.0])
    def test_matches_recursion(self, toy, k):
        direct = correlation_transform(toy, k)
        recursion = t_infinity([toy, toy], k)
        assert abs(direct - recursion) <= 1e-6 * (1.0 + abs(recursion))

    def test_zero_k_is_half_square(self, toy):
        assert correlation_transform(toy, 0.0) == pytest.approx(0.5 * toy.integral() ** 2, rel=1e-6)

    def test_spectrum_shares_lags(self, toy):
        ks = [0.5, 1.0]
        values = correlation_spectrum(toy, ks)
        assert values[1] == correlation_transform(toy, 1.0)

    def test_chirp_block(self, signal16, chirp16):
        block = signal16.block(24)
        k = chirp16.carrier(24)
        recursion = t_infinity([block, block], k)
        assert abs(correlation_transform(block, k) - recursion) <= 1e-6 * (1.0 + abs(recursion))


class TestRiesz(object):
    @classmethod
    def setup_class(cls):
        print("SETUP")

    def setup_method(self, method):
        self.ks = np.linspace(-20.0, 20.0, 801)

    def test_complementary(self):
        g = Spectrum(self.ks, packet(self.ks, 5.0) + 0.3 * packet(self.ks, -2.0))
        total = riesz_minus_grid(g).values + riesz_plus_grid(g).values
        assert np.max(np.abs(total - g.values)) <= 1e-12

    def test_keeps_negative_frequencies(self):
        g = Spectrum(self.ks, packet(self.ks, -6.0))
        assert np.max(np.abs(riesz_minus_grid(g, pad=8).values - g.values)) <= 1e-6

    def test_removes_positive_frequencies(self):
        g = Spectrum(self.ks, packet(self.ks, 6.0))
        assert np.max(np.abs(riesz_minus_grid(g, pad=8).values)) <= 1e-6

    def test_idempotent_without_mean(self):
        g = Spectrum(self.ks, packet(self.ks, 6.0) + packet(self.ks, -6.0))
        once = riesz_minus_grid(g, pad=8)
        twice = riesz_minus_grid(once, pad=8)
        assert np.max(np.abs(twice.values - once.values)) <= 1e-6

    def test_edge_decay_is_noted(self):
        g = Spectrum(self.ks, np.ones(self.ks.size))
        assert any(note.startswith('edge-decay') for note in riesz_minus_grid(g).notes)

    def test_non_uniform_grid(self):
        g = Spectrum([0.0, 1.0, 3.0], np.zeros(3))
        with pytest.raises(GridMismatchError):
            riesz_minus_grid(g)

    def test_padding_floor(self):
        g = Spectrum(self.ks, packet(self.ks, 6.0))
        with pytest.raises(GridMismatchError):
            riesz_minus_grid(g, pad=2)


class TestFit(object):
    @classmethod
    def setup_class(cls):
        print("SETUP")

    def test_window(self):
        assert inverse_law_window(36) == (2, 9)
        assert inverse_law_window(4) == (2, 2)

    def test_exact_inverse_law(self):
        c = 0.05 - 0.2j
        values = {d: c / d for d in range(-9, 10) if d}
        fit = fit_inverse_law(values, (2, 9))
        assert abs(fit.constant - c) <= 1e-14
        assert fit.r2 == 1.0
        assert fit.envelope <= 1e-13
        assert fit.points == 16
        assert consistent_sign(values, fit.constant, (2, 9))
        assert not consistent_sign({d: -v for d, v in values.items()}, fit.constant, (2, 9))

    def test_envelope_of_quadratic_residual(self):
        values = {d: 1.0 / d + 0.5 / d ** 2 for d in range(2, 10)}
        fit = fit_inverse_law(values, (2, 9))
        assert fit.r2 > 0.9
        assert fit.envelope > 0.0

    def test_alternating_signs_have_no_inverse_law(self):
        values = {d: (-1) ** d / abs(d) for d in range(-9, 10) if d}
        fit = fit_inverse_law(values, (2, 9))
        assert abs(fit.constant) <= 1e-12
        assert fit.r2 < 0.1

    def test_residual_envelope_of_even_correction(self):
        values = {d: 0.3 / d + 0.5 / d ** 2 for d in range(-9, 10) if d}
        fit = fit_inverse_law(values, (2, 9))
        assert fit.constant == pytest.approx(0.3)
        assert fit.envelope == pytest.approx(0.5)
        assert fit.excess == pytest.approx(1.0)

    def test_single_distance_has_no_envelope(self):
        fit = fit_inverse_law({-2: -0.5, 2: 0.5}, (2, 2))
        assert fit.envelope is None
        assert fit.excess is None

    def test_quadratic_envelope(self):
        envelope = quadratic_envelope({d: 3.0 / d ** 2 for d in range(2, 21)})
        assert envelope.constant == pytest.approx(3.0)
        assert envelope.holds(2.0)
        assert envelope.inner == 10 and envelope.outer == 9

    def test_flat_magnitudes_break_envelope(self):
        envelope = quadratic_envelope({d: 0.1 for d in range(2, 21)})
        assert envelope.excess == pytest.approx((20.0 / 11.0) ** 2)
        assert not envelope.holds(2.0)

    def test_envelope_needs_both_halves(self):
        with pytest.raises(FitError):
            quadratic_envelope({-2: 1.0, 2: 1.0})
        with pytest.raises(FitError):
            quadratic_envelope({0: 1.0})

    def test_empty_window(self):
        with pytest.raises(FitError):
            fit_inverse_law({1: 1.0}, (2, 9))

    def test_log_growth(self):
        sizes = [16, 36, 64, 100, 144]
        fit = fit_log_growth(sizes, [2.0 * math.log(n) for n in sizes])
        assert fit.constant == pytest.approx(2.0)
        assert fit.r2 == pytest.approx(1.0)
        assert fit.spread == pytest.approx(0.0, abs=1e-12)

    def test_log_growth_needs_two_sizes(self):
        with pytest.raises(FitError):
            fit_log_growth([16], [1.0])

    def test_ratio(self):
        fit = fit_ratio([1.5, float('nan'), 1.7], (0.0, 10.0))
        assert fit.constant == pytest.approx(1.6)
        assert fit.residual == pytest.approx(0.2)
        assert fit.points == 2
        payload = json.loads(fit.to_json())
        assert payload['constant_re'] == pytest.approx(1.6)
        assert payload['window'] == [0.0, 10.0]


class TestLorentz(object):
    @classmethod
    def setup_class(cls):
        print("SETUP")

    def test_constant(self):
        ks = np.linspace(0.0, 3.0, 301)
        assert weak_l2_quasinorm(Spectrum(ks, np.ones(ks.size))) == pytest.approx(math.sqrt(3.0))

    def test_single_spike(self):
        ks = np.linspace(0.0, 1.0, 5)
        values = np.array([0.0, 0.0, 4.0, 0.0, 0.0])
        assert weak_l2_quasinorm(Spectrum(ks, values)) == pytest.approx(4.0 * math.sqrt(0.25))

    def test_scaling(self):
        ks = np.linspace(1.0, 2.0, 11)
        values = 1.0 / ks
        assert weak_l2_quasinorm(Spectrum(ks, 3.0 * values)) == pytest.approx(
            3.0 * weak_l2_quasinorm(Spectrum(ks, values)))

    def test_negative_rejected(self):
        with pytest.raises(FitError):
            weak_l2_quasinorm(Spectrum([0.0, 1.0], [1.0, -1.0]))

    def test_single_sample_rejected(self):
        with pytest.raises(FitError):
            weak_l2_quasinorm(Spectrum([0.0], [1.0]))

    def test_half_indicator(self):
        ks = np.linspace(0.0, 2.0, 401)
        values = np.where(ks < 1.0, 2.0, 0.0)
        assert weak_l2_quasinorm(Spectrum(ks, values)) == pytest.approx(2.0 * math.sqrt(1.0), rel=1e-2)
