"""Shared fixtures for the JordanCone test suite."""
import os
import sys

import pytest

# Allow imports from project root
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from jordan_cone.core.algebra import AlgebraDescriptor
from jordan_cone.core.presets import PresetManager
from jordan_cone.core.sampling import Rng
from jordan_cone.core.settings_store import SettingsStore

CATALOGUE = [
    "diag:2", "diag:3", "diag:4",
    "spin:2", "spin:3",
    "sym:2", "sym:3",
    "sum(diag:2,spin:3)",
    "sum(sym:2,sym:2)",
]


@pytest.fixture
def rng():
    return Rng(1234)


@pytest.fixture(params=CATALOGUE)
def algebra(request):
    return AlgebraDescriptor.parse(request.param)


@pytest.fixture
def isolated_home(tmp_path, monkeypatch):
    """Point the settings store and preset manager at a temporary directory."""
    monkeypatch.setattr(SettingsStore, "STORE_DIR", tmp_path)
    monkeypatch.setattr(PresetManager, "PRESETS_DIR", tmp_path)
    monkeypatch.delenv("JORDAN_CONE_SEED", raising=False)
    return tmp_path
