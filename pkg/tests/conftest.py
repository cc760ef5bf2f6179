import sys
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from linalg.sparse import SparseMatrix  # noqa: E402
from model.functions import get_function  # noqa: E402
from model.generators import generate_example_4_1  # noqa: E402
from model.instance import OmegaChoice, VncpInstance  # noqa: E402
from utils.config_manager import ConfigManager  # noqa: E402

TEST_CONFIG = ROOT / "configs" / "test_config.json"
PARAMETER_BOOK = ROOT / "configs" / "parameter_book.json"


@pytest.fixture
def test_config_path():
    return str(TEST_CONFIG)


@pytest.fixture
def app_config():
    return ConfigManager(str(TEST_CONFIG)).config


@pytest.fixture
def book_path():
    return str(PARAMETER_BOOK)


@pytest.fixture
def scalar_instance():
    """1-D instance A = 2, B = 1 with zero nonlinear terms; solution x* = 0"""
    zero = get_function("zero")
    return VncpInstance(SparseMatrix.from_dense([[2.0]]), SparseMatrix.from_dense([[1.0]]), zero, zero, "scalar")


@pytest.fixture
def example_41_small():
    def make(n=50, phi="abs", psi="abs"):
        return generate_example_4_1(n).instance(get_function(phi), get_function(psi))
    return make


@pytest.fixture
def omega5():
    def make(n):
        return OmegaChoice.scalar(5.0, n)
    return make


@pytest.fixture
def rng():
    return np.random.default_rng(42)
