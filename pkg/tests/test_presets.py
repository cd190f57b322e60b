"""Tests for run configuration, presets, the settings store and utils."""
import json

import pytest

from jordan_cone.core.algebra import AlgebraDescriptor
from jordan_cone.core.errors import InvalidDescriptor
from jordan_cone.core.presets import BUILTIN_PRESETS, PresetManager, RunConfig, parse_algebras
from jordan_cone.core.settings_store import SettingsStore
from jordan_cone.core.utils import (
    derive_seed,
    format_duration_ms,
    format_residual,
    resolve_seed,
    stable_hash64,
)


def test_run_config_merge_skips_none():
    config = RunConfig(seed=3, samples=10).merged({"samples": None, "tol_scale": 2.0, "unknown": 1})
    assert config.samples == 10
    assert config.tol_scale == 2.0
    assert RunConfig.from_dict(config.to_dict()) == config


def test_builtin_presets_parse():
    for name, data in BUILTIN_PRESETS.items():
        assert parse_algebras(data["algebras"]), name
    with pytest.raises(InvalidDescriptor):
        parse_algebras(["diag:3", "bogus"])


def test_preset_layering(tmp_path):
    manager = PresetManager(tmp_path)
    base = RunConfig(seed=4, workers=3)
    quick = manager.get("quick", base)
    assert quick.preset == "quick"
    assert quick.samples == 16
    assert quick.workers == 3
    assert quick.seed == 4
    assert manager.get("missing") is None


def test_user_presets_persist(tmp_path):
    manager = PresetManager(tmp_path)
    manager.save_user_preset("mine", RunConfig(algebras=["sym:3"], samples=12))
    reloaded = PresetManager(tmp_path)
    assert reloaded.get_data("mine") == {"algebras": ["sym:3"], "samples": 12, "tol_scale": 1.0}
    assert reloaded.all_preset_names()[-1] == "mine"
    assert not reloaded.is_builtin("mine")
    assert reloaded.delete_user_preset("mine")
    assert not reloaded.delete_user_preset("mine")


def test_corrupt_presets_file_is_ignored(tmp_path):
    (tmp_path / "presets.json").write_text("{not json", encoding="utf-8")
    assert PresetManager(tmp_path).all_preset_names() == list(BUILTIN_PRESETS)


def test_settings_store_keeps_persistent_fields_only(tmp_path):
    store = SettingsStore(tmp_path)
    assert store.load() is None
    store.save(RunConfig(seed=99, samples=5, workers=2, algebras=["diag:2"]))
    on_disk = json.loads((tmp_path / "settings.json").read_text(encoding="utf-8"))
    assert set(on_disk) == SettingsStore.PERSISTENT_FIELDS
    loaded = store.load()
    assert loaded.samples == 5
    assert loaded.workers == 2
    assert loaded.seed == 0
    assert loaded.algebras == []
    assert store.reset()
    assert not store.reset()


def test_seed_resolution(monkeypatch):
    monkeypatch.delenv("JORDAN_CONE_SEED", raising=False)
    assert resolve_seed(None) == 0
    assert resolve_seed(12) == 12
    monkeypatch.setenv("JORDAN_CONE_SEED", "0x10")
    assert resolve_seed(None) == 16
    assert resolve_seed(5) == 5
    monkeypatch.setenv("JORDAN_CONE_SEED", "garbage")
    assert resolve_seed(None) == 0


def test_derived_seeds():
    assert stable_hash64("jordan_identity/Diagonal(2)") == stable_hash64("jordan_identity/Diagonal(2)")
    assert derive_seed(0, "a") == stable_hash64("a")
    assert derive_seed(5, "a") ^ derive_seed(6, "a") == 5 ^ 6
    assert 0 <= derive_seed(-1, "a") < 2 ** 64


def test_formatting():
    assert format_residual(None) == "error"
    assert format_residual(1.234e-14) == "1.2e-14"
    assert format_duration_ms(850) == "850 ms"
    assert format_duration_ms(12_400) == "12.4 s"
    assert format_duration_ms(125_000) == "02:05"


def test_algebra_set_from_preset_matches_descriptors():
    algebras = parse_algebras(BUILTIN_PRESETS["dichotomy"]["algebras"])
    assert AlgebraDescriptor.sym(2) in algebras
    assert all(a.rank >= 2 for a in algebras)
