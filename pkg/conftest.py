"""Shared pytest fixtures"""

import os
import sys

import pytest

ROOT = os.path.dirname(os.path.abspath(__file__))
sys.path.insert(0, ROOT)

from config.field_config import config as field_config  # noqa: E402
from mpc.field import FieldParams  # noqa: E402
from mpc.protocols import ProtocolSuite  # noqa: E402
from mpc.rng import ProtocolRng  # noqa: E402


@pytest.fixture
def small_params():
    """p = 101, q = 3, t = 1: hand-checkable shares."""
    return FieldParams(field_config.test_prime, 3, 1)


@pytest.fixture
def big_params():
    return FieldParams(field_config.prime, 3, 1)


@pytest.fixture
def rng():
    return ProtocolRng(7)


@pytest.fixture
def suite(small_params, rng):
    return ProtocolSuite(small_params, rng)


@pytest.fixture
def big_suite(big_params):
    """Field large enough for float bit patterns."""
    return ProtocolSuite(big_params, ProtocolRng(7))


@pytest.fixture
def corpus_dir():
    return os.path.join(ROOT, "corpus")


@pytest.fixture
def input_dir(corpus_dir):
    return os.path.join(corpus_dir, "inputs")
