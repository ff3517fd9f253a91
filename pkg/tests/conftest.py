import os
import sys

import pytest

test_path = os.path.dirname(os.path.abspath(__file__))
modules_path = os.path.dirname(test_path)
sys.path.insert(0, modules_path)

from signal_model.bump import make_bump, search_a
from signal_model.chirp import build_chirp
from signal_model.sampling import sample_signal
from diracutil.lib import single_bump_signal, toy_signal

SMALL_N = 16


@pytest.fixture(scope='session')
def bump():
    return make_bump()


@pytest.fixture(scope='session')
def selection(bump):
    return search_a(bump)


@pytest.fixture(scope='session')
def a_value(selection):
    return selection.value


@pytest.fixture(scope='session')
def chirp16(bump, a_value):
    return build_chirp(SMALL_N, a_value, bump)


@pytest.fixture(scope='session')
def signal16(chirp16):
    return sample_signal(chirp16, 3.0 * chirp16.a)


@pytest.fixture(scope='session')
def toy(bump):
    return toy_signal(bump)


@pytest.fixture(scope='session')
def weak_bump(bump):
    # |F|_1 = 0.1
    return single_bump_signal(bump, scale=0.1)
