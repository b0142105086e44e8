"""
Pytest configuration.
"""

import os
import sys
from pathlib import Path

import numpy as np
import pytest

# Add src to path for imports
sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from diophantine_exponents import create_manifold  # noqa: E402
from diophantine_exponents.common.utils import RationalSampler  # noqa: E402

FIXTURES = Path(__file__).resolve().parent / "fixtures"


@pytest.fixture
def sampler() -> RationalSampler:
    return RationalSampler(seed=20240601)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240601)


@pytest.fixture
def heisenberg_family():
    return create_manifold("heisenberg", {"k": 2})


@pytest.fixture
def veronese_manifold_path() -> Path:
    return FIXTURES / "veronese_m2_p3.json"
