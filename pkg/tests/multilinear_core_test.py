import io
import os
import sys

import numpy as np
import pytest

test_path = os.path.dirname(os.path.abspath(__file__))
modules_path = os.path.dirname(test_path)
sys.path.insert(0, modules_path)

from utilities_common.exception import BudgetError, GridMismatchError, ResolutionError
from signal_model.fourier import fourier_at
from signal_model.sampling import sample_function
from multilinear_core.oracle import brute_force_simplex
from multilinear_core.simplex import (
    factor_signs, factorized_value, phase_sign, t_infinity, t_max, t_profile
)
from multilinear_core.split import block_data, t2_split, t3_split
from diracutil.lib import toy_signal


def relative(value, reference):
    return abs(value - reference) / (1.0 + abs(reference))


class TestSimplex(object):
    @classmethod
    def setup_class(cls):
        print("SETUP")

    def test_phase_signs(self):
        assert [phase_sign(m) for m in (1, 2, 3, 4)] == [-1, 1, -1, 1]
        assert factor_signs(3) == [-1, 1, -1]

    def test_first_order_is_conjugate_transform(self, toy):
        for k in (0.0, 1.3, 4.0):
            assert abs(t_infinity([toy], k) - np.conj(fourier_at(toy, k))) <= 1e-12

    @pytest.mark.parametrize('n', [1, 2, 3])
    def test_negative_k_conjugates(self, toy, n):
        for k in (1.3, 4.0):
            assert abs(t_infinity([toy] * n, -k) - np.conj(t_infinity([toy] * n, k))) <= 1e-12

    def test_zero_k_pair_is_half_square(self, toy):
        assert relative(t_infinity([toy, toy], 0.0), 0.5 * toy.integral() ** 2) <= 1e-10

    def test_pair_converges_under_refinement(self, bump, toy):
        fine = toy_signal(bump, dx=toy.dx / 2.0)
        for k in (0.0, 1.3, 4.0):
            assert abs(t_infinity([fine, fine], k) - t_infinity([toy, toy], k)) <= 1e-7

    def test_profile_shape(self, toy):
        profile = t_profile([toy, toy], 1.0)
        assert profile.w.shape == (3, toy.size)
        assert np.all(profile.profile(0) == 1.0)
        assert profile.final == profile.value_at(10.0)
        assert profile.value_at(-5.0) == 0j
        assert profile.value_at(-5.0, m=0) == 1.0

    def test_profile_constant_across_gap(self, toy):
        profile = t_profile([toy, toy], 1.0)
        assert profile.value_at(1.0) == profile.value_at(1.4)

    def test_profile_csv(self, toy):
        stream = io.StringIO()
        t_profile([toy, toy], 1.0).to_csv(stream)
        lines = stream.getvalue().splitlines()
        assert lines[0] == 'x,re_w1,im_w1,re_w2,im_w2'
        assert len(lines) == toy.size + 1

    def test_t_max(self, toy):
        peak, position = t_max(toy, 1.0, 2)
        profile = t_profile([toy, toy], 1.0)
        assert peak == pytest.approx(np.max(np.abs(profile.profile())))
        assert profile.value_at(position) == pytest.approx(profile.profile()[np.argmax(np.abs(profile.profile()))])

    def test_t_max_order(self, toy):
        with pytest.raises(ValueError):
            t_max(toy, 1.0, 4)

    def test_grid_mismatch(self, toy):
        other = sample_function(lambda x: np.zeros_like(x), [(0.0, 1.0)], toy.dx, toy.k_max)
        with pytest.raises(GridMismatchError):
            t_profile([toy, other], 1.0)

    def test_unresolved(self, toy):
        with pytest.raises(ResolutionError):
            t_profile([toy], 2.0 * toy.k_max)

    def test_factorized_value(self):
        assert factorized_value([(1j, -1), (2.0, 1)]) == -2j
        with pytest.raises(ValueError):
            factorized_value([])

    def test_quadratic_modulus(self, toy):
        for k in (0.3, 2.0):
            t2 = t_infinity([toy, toy], k)
            assert abs(2.0 * t2.real - abs(fourier_at(toy, k)) ** 2) <= 1e-8


class TestFactorization(object):
    @classmethod
    def setup_class(cls):
        print("SETUP")

    def test_pair_of_disjoint_blocks(self, toy):
        first = toy.restrict([0], [0, 1])
        second = toy.restrict([1], [0, 1])
        k = 1.3
        expected = factorized_value(zip((fourier_at(toy.block(0), k), fourier_at(toy.block(1), k)),
                                        factor_signs(2)))
        assert relative(t_infinity([first, second], k), expected) <= 1e-10

    def test_reversed_order_vanishes(self, toy):
        first = toy.restrict([0], [0, 1])
        second = toy.restrict([1], [0, 1])
        assert t_infinity([second, first], 1.3) == 0j

    def test_chirp_triple(self, signal16):
        grid = [19, 22, 26]
        k = signal16.a * 22 / signal16.n
        parts = [signal16.restrict([j], grid) for j in grid]
        f = [fourier_at(signal16.block(j), k) for j in grid]
        expected = factorized_value(zip(f, factor_signs(3)))
        assert relative(t_infinity(parts, k), expected) <= 1e-8


class TestBruteForce(object):
    @classmethod
    def setup_class(cls):
        print("SETUP")

    @pytest.mark.parametrize('n', [1, 2, 3])
    @pytest.mark.parametrize('k', [0.0, 1.3, 4.0])
    def test_matches_recursion(self, toy, n, k):
        assert relative(brute_force_simplex([toy] * n, k), t_infinity([toy] * n, k)) <= 1e-6

    def test_order_budget(self, toy):
        with pytest.raises(BudgetError):
            brute_force_simplex([toy] * 4, 1.0)

    def test_support_budget(self):
        wide = sample_function(lambda x: np.sin(np.pi * x / 40.0) ** 2, [(0.0, 40.0)], 0.125, 4.0)
        with pytest.raises(BudgetError):
            brute_force_simplex([wide], 1.0)

    def test_point_budget(self, toy):
        with pytest.raises(BudgetError):
            brute_force_simplex([toy], 1.0, point_budget=100)


class TestSplit(object):
    @classmethod
    def setup_class(cls):
        print("SETUP")

    def test_t2_split_matches_profile(self, signal16, chirp16):
        j0 = 28
        k = chirp16.a * j0 / chirp16.n
        split = t2_split(signal16, chirp16, k, j0)
        assert split.last_block == j0 - chirp16.root
        assert split.x == chirp16.gap_point(split.last_block)
        value = t_profile([signal16, signal16], k).value_at(split.x)
        assert relative(split.total, value) <= 1e-9
        assert 0.0 <= split.off_share < 1.0

    def test_t3_split_matches_recursion(self, signal16, chirp16):
        j0 = 24
        k = chirp16.a * j0 / chirp16.n
        split = t3_split(signal16, chirp16, k, j0)
        total = t_infinity([signal16] * 3, k)
        assert relative(split.total, total) <= 1e-6
        assert split.j0 == j0
        assert split.kkk_envelope.constant > 0.0
        assert split.kkk_envelope.holds(2.0)

    def test_block_data(self, signal16, chirp16):
        k = chirp16.carrier(20)
        data = block_data(signal16, k, [19, 20, 21], cubic=True)
        assert data.blocks == (19, 20, 21)
        assert data.f.shape == data.tau.shape == data.kappa.shape == (3,)
        assert abs(data.f[1] - fourier_at(signal16.block(20), k)) <= 1e-15
