import math
import os
import sys

import numpy as np
import pytest

test_path = os.path.dirname(os.path.abspath(__file__))
modules_path = os.path.dirname(test_path)
sys.path.insert(0, modules_path)

from utilities_common import constants
from utilities_common.exception import BumpError, ChirpError, ResolutionError, SamplingError, SelectionError
from signal_model.bump import bump_fourier, check_a_condition, fourier_lattice, make_bump, search_a
from signal_model.chirp import block_fourier_closed_form, build_chirp, is_perfect_square
from signal_model.fourier import Spectrum, fourier_at, fourier_transform, verify_block_ft
from signal_model.sampling import chirp_layout, sample_block, sample_function, sample_signal


class TestBump(object):
    @classmethod
    def setup_class(cls):
        print("SETUP")

    def test_mass_and_origin(self, bump):
        assert abs(bump.mass() - 1.0) <= 1e-10
        assert abs(bump_fourier(bump, 0.0) - 1.0) <= 1e-10

    def test_support_and_peak(self, bump):
        assert bump(np.array([-0.25, 0.25, 0.3]))[0] == 0.0
        assert np.all(bump(np.array([0.25, 0.3, -1.0])) == 0.0)
        assert bump(np.array([0.0]))[0] == pytest.approx(bump.peak)
        assert bump.peak == pytest.approx(math.exp(-1.0) / bump.norm)

    def test_fourier_is_even_and_real(self, bump):
        xi = np.array([0.5, 3.0, 17.0])
        plus = bump_fourier(bump, xi)
        minus = bump_fourier(bump, -xi)
        assert np.max(np.abs(plus - minus)) <= 1e-14
        assert np.max(np.abs(plus.imag)) == 0.0

    def test_fourier_keeps_shape(self, bump):
        xi = np.zeros((2, 3))
        assert bump_fourier(bump, xi).shape == (2, 3)
        assert isinstance(bump_fourier(bump, 1.0), complex)

    def test_fourier_matches_quadrature(self, bump):
        from scipy import integrate
        xi = 2.5
        value, _ = integrate.quad(lambda x: math.cos(2.0 * xi * x) * bump(np.array([x]))[0],
                                  -0.25, 0.25, epsabs=1e-13, limit=200)
        assert abs(bump_fourier(bump, xi).real - value) <= 1e-10

    def test_fourier_stays_positive_near_origin(self, bump):
        xi = np.linspace(-1.0, 1.0, 201)
        assert np.min(bump_fourier(bump, xi).real) >= math.cos(0.5)

    def test_fourier_tail_decays_faster_than_exponential(self, bump):
        xi = np.arange(10.0, 100.0, 0.05)
        modulus = np.abs(bump_fourier(bump, xi))
        tail = {start: np.max(modulus[xi >= start]) for start in (10.0, 20.0, 40.0)}
        first = tail[20.0] / tail[10.0]
        second = tail[40.0] / tail[20.0]
        assert second < first < 1.0

    def test_sharp_kind(self):
        sharp = make_bump(constants.BUMP_KIND_SHARP)
        assert sharp.sigma == 4.0
        assert abs(sharp.mass() - 1.0) <= 1e-10

    def test_bad_kind(self):
        with pytest.raises(BumpError):
            make_bump('gaussian')

    def test_bad_tolerance(self):
        with pytest.raises(BumpError):
            make_bump(tol=0.0)

    def test_lattice_matches_direct(self, bump):
        step = 2.0 / 1024
        lattice = fourier_lattice(bump, step, 4096)
        for m in (0, 1, 511, 4095):
            assert abs(lattice[m] - bump_fourier(bump, m * step).real) <= 1e-12


class TestFrequencyConstant(object):
    @classmethod
    def setup_class(cls):
        print("SETUP")

    def test_selection_on_lattice(self, selection):
        assert selection.value > 0
        assert selection.value == pytest.approx(selection.multiple * selection.step, rel=1e-15)
        assert selection.grid_count % 2 == 1
        assert selection.worst_ratio <= 1.0

    def test_selection_is_minimal(self, bump, selection):
        below = (selection.multiple - 1) * selection.step
        assert not check_a_condition(bump, below).passed

    def test_recheck_passes(self, bump, a_value):
        report = check_a_condition(bump, a_value)
        assert report.passed
        assert 'path=lattice' in report.items[0].detail

    def test_recheck_on_finer_grid(self, bump, a_value):
        assert check_a_condition(bump, a_value, 4 * constants.DEFAULT_XI_GRID_COUNT).passed

    def test_small_a_fails(self, bump):
        assert not check_a_condition(bump, 1.0).passed

    def test_ceiling(self, bump):
        with pytest.raises(SelectionError) as e:
            search_a(bump, ceiling=2.0)
        assert e.value.ceiling == 2.0
        assert e.value.worst_xi is not None

    def test_coarse_grid_rejected(self, bump):
        with pytest.raises(SelectionError):
            search_a(bump, xi_grid_count=100)


class TestChirp(object):
    @classmethod
    def setup_class(cls):
        print("SETUP")

    def test_perfect_square(self):
        assert is_perfect_square(16)
        assert is_perfect_square(144)
        assert not is_perfect_square(17)

    @pytest.mark.parametrize('n', [17, 9, 15])
    def test_bad_size(self, bump, n):
        with pytest.raises(ChirpError):
            build_chirp(n, 10.0, bump)

    def test_bad_constant(self, bump):
        with pytest.raises(ChirpError):
            build_chirp(16, 0.0, bump)

    def test_layout(self, chirp16):
        assert list(chirp16.blocks) == list(range(16, 33))
        assert chirp16.root == 4
        assert chirp16.support(20) == (316.0, 324.0)
        assert chirp16.gap_point(20) == 328.0
        (k_lo, k_hi), (x_lo, x_hi) = chirp16.phase_space_cell(20)
        assert k_hi - k_lo == pytest.approx(2.0 / 16)
        assert (x_lo, x_hi) == (312.0, 328.0)

    def test_block_outside_family(self, chirp16):
        with pytest.raises(ChirpError):
            chirp16.block(15, np.array([0.0]))

    def test_blocks_sum_to_potential(self, chirp16):
        x = np.linspace(chirp16.support(20)[0], chirp16.support(20)[1], 9)
        assert np.allclose(chirp16(x), chirp16.block(20, x), atol=1e-10)

    def test_potential_norm(self, signal16):
        assert 0.1 <= math.sqrt(signal16.l2_norm_sq()) <= 10.0

    def test_far_detuning_decays(self, chirp16):
        k = (chirp16.a * 16 + 400.0) / 16
        assert abs(block_fourier_closed_form(chirp16, 16, k)) <= 1e-6


class TestSampling(object):
    @classmethod
    def setup_class(cls):
        print("SETUP")

    def test_lattice_alignment(self, signal16):
        ratio = signal16.x / signal16.dx
        assert np.max(np.abs(ratio - np.round(ratio))) <= 1e-6
        assert all(v.size % 2 == 1 for v in signal16.values)

    def test_phase_resolution(self, signal16, chirp16):
        assert signal16.dx * (2.0 * signal16.k_max + 4.0 * chirp16.a) <= constants.PHASE_STEP * (1.0 + 1e-12)

    def test_oversample_refines(self, chirp16):
        dx1, _ = chirp_layout(chirp16, 3.0 * chirp16.a, 1.0)
        dx2, _ = chirp_layout(chirp16, 3.0 * chirp16.a, 2.0)
        assert dx2 < 0.51 * dx1

    def test_block_on_parent_lattice(self, chirp16, signal16):
        single = sample_block(chirp16, 20, signal16.k_max)
        part = signal16.block(20)
        assert single.same_grid(part)
        assert np.array_equal(single.values[0], part.values[0])

    def test_k_max_too_small(self, chirp16):
        with pytest.raises(SamplingError):
            sample_signal(chirp16, chirp16.a)

    def test_undersampled(self, chirp16):
        with pytest.raises(ResolutionError):
            sample_signal(chirp16, 3.0 * chirp16.a, oversample=0.5)

    def test_memory_budget(self, chirp16):
        with pytest.raises(SamplingError) as e:
            sample_signal(chirp16, 3.0 * chirp16.a, memory_budget=1024)
        assert e.value.required_count > 0

    def test_restrict_keeps_grid(self, signal16):
        part = signal16.restrict([20], [19, 20, 21])
        assert part.labels == (19, 20, 21)
        assert not np.any(part.values[0])
        assert np.array_equal(part.values[1], signal16.block(20).values[0])

    def test_sample_function(self):
        signal = sample_function(lambda x: np.sin(np.pi * x) ** 2, [(0.0, 1.0), (2.0, 3.0)], 0.1, 4.0)
        assert all(v.size % 2 == 1 for v in signal.values)
        assert signal.offsets == (0, 20)
        assert signal.integral() == pytest.approx(1.0, abs=1e-3)

    def test_overlap_rejected(self):
        with pytest.raises(SamplingError):
            sample_function(lambda x: 0.0 * x, [(0.0, 1.0), (0.5, 2.0)], 0.1, 4.0)


class TestFourier(object):
    @classmethod
    def setup_class(cls):
        print("SETUP")

    def test_block_transform_matches_closed_form(self, chirp16):
        k_grid = np.linspace(0.55 * chirp16.a, 2.95 * chirp16.a, 9)
        report = verify_block_ft(chirp16, 20, k_grid, tol=1e-8)
        assert report.passed, report.table()

    def test_block_transform_outside_window(self, chirp16):
        report = verify_block_ft(chirp16, 20, [0.1 * chirp16.a])
        assert not report.passed

    def test_conjugate_symmetry(self, signal16):
        block = signal16.block(20)
        spectrum = fourier_transform(block, [-3.0, -1.0, 1.0, 3.0])
        assert spectrum.symmetry_error() <= 1e-12

    def test_transform_matches_pointwise(self, signal16):
        block = signal16.block(24)
        ks = np.array([1.0, 10.0, 20.0])
        spectrum = fourier_transform(block, ks)
        for k, value in zip(ks, spectrum.values):
            assert abs(value - fourier_at(block, k)) <= 1e-12

    def test_unresolved_is_noted(self, signal16):
        spectrum = fourier_transform(signal16.block(20), [2.0 * signal16.k_max])
        assert 'unresolved-k' in spectrum.notes
        assert spectrum.convention == constants.FACTOR_2_CONVENTION

    def test_spectrum_step(self):
        spectrum = Spectrum(np.linspace(0.0, 1.0, 5), np.zeros(5))
        assert spectrum.is_uniform()
        assert spectrum.step == 0.25
        assert not Spectrum([0.0, 1.0, 3.0], np.zeros(3)).is_uniform()

    def test_refinement_converges(self, chirp16):
        coarse = sample_block(chirp16, 20, 3.0 * chirp16.a)
        fine = sample_block(chirp16, 20, 3.0 * chirp16.a, oversample=2.0)
        k = chirp16.carrier(20)
        assert abs(fourier_at(coarse, k) - fourier_at(fine, k)) <= 1e-8
