"""
settings_store.py — Persistent settings storage for JordanCone.
Saves/restores the last-used run defaults between sessions.
"""
import json
from pathlib import Path

from jordan_cone.core.presets import RunConfig


class SettingsStore:
    """
    Persists a subset of RunConfig fields to disk so that `config save`
    defaults apply to every later run.
    """

    STORE_DIR = Path.home() / ".jordan_cone"

    # Seeds and algebra lists belong to a single run and are not remembered.
    PERSISTENT_FIELDS = {"samples", "tol_scale", "workers", "preset"}

    def __init__(self, store_dir: Path | None = None):
        self.store_dir = Path(store_dir) if store_dir else self.STORE_DIR
        self.store_file = self.store_dir / "settings.json"

    def save(self, config: RunConfig) -> None:
        """Persist the relevant parts of *config* to disk."""
        try:
            self.store_dir.mkdir(parents=True, exist_ok=True)
            data = {k: v for k, v in config.to_dict().items()
                    if k in self.PERSISTENT_FIELDS}
            with open(self.store_file, "w", encoding="utf-8") as f:
                json.dump(data, f, indent=2, sort_keys=True)
        except Exception:
            pass   # Never crash on save failure

    def load(self) -> RunConfig | None:
        """
        Load stored settings and return a RunConfig, or None if no
        settings file exists yet.
        """
        if not self.store_file.exists():
            return None
        try:
            with open(self.store_file, "r", encoding="utf-8") as f:
                data = json.load(f)
            return RunConfig.from_dict({k: v for k, v in data.items() if k in self.PERSISTENT_FIELDS})
        except Exception:
            return None

    def reset(self) -> bool:
        """Forget stored settings. Returns True if a file was removed."""
        try:
            self.store_file.unlink()
            return True
        except OSError:
            return False
