# conftest.py: src/ no sys.path e fixtures compartilhadas

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from core.params import PhysParams


@pytest.fixture
def params_padrao() -> PhysParams:
    """Γ = 1, κ = 1, Δ₀ = 0 (casos das figuras)."""
    return PhysParams(1.0, 1.0, 0.0)


@pytest.fixture
def grade_curta() -> np.ndarray:
    return np.linspace(0.0, 5.0, 101)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)
