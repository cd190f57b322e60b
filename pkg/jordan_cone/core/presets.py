"""
presets.py — Run configuration dataclass and algebra-set preset management for JordanCone
"""
import json
from dataclasses import dataclass, field, asdict
from pathlib import Path

from jordan_cone.core.algebra import AlgebraDescriptor


@dataclass
class RunConfig:
    """Complete configuration for one verification run."""
    seed: int = 0
    samples: int | None = None      # None = each property's nominal count
    tol_scale: float = 1.0          # multiplies every property tolerance
    workers: int = 1                # >1 runs property jobs on a thread pool
    preset: str = "default"         # algebra set used when `algebras` is empty
    algebras: list = field(default_factory=list)   # shorthands, e.g. ["diag:3", "sum(spin:2,diag:2)"]
    json_output: bool = False

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        valid_fields = {f.name for f in cls.__dataclass_fields__.values()}
        filtered = {k: v for k, v in data.items() if k in valid_fields}
        return cls(**filtered)

    def merged(self, overrides: dict) -> "RunConfig":
        """Copy with every non-None override applied."""
        data = self.to_dict()
        data.update({k: v for k, v in overrides.items() if v is not None})
        return RunConfig.from_dict(data)


# ── Built-in presets ──────────────────────────────────────────────────────────

BUILTIN_PRESETS: dict[str, dict] = {
    "default": {
        "algebras": [
            "diag:2", "diag:3", "diag:4", "diag:5",
            "spin:2", "spin:3", "spin:4",
            "sym:2", "sym:3", "sym:4",
            "sum(diag:2,spin:3)",
            "sum(sym:2,sym:2)",
        ],
    },
    "quick": {
        "algebras": ["diag:2", "diag:3", "spin:3", "sym:3"],
        "samples": 16,
    },
    "dichotomy": {
        "algebras": ["diag:2", "spin:2", "spin:5", "sym:2", "diag:3", "sym:3", "sum(spin:2,diag:2)"],
    },
    "sums": {
        "algebras": ["sum(diag:2,spin:3)", "sum(sym:2,sym:2)", "sum(spin:2,diag:2)", "sum(diag:2,diag:2,spin:2)"],
    },
}


def parse_algebras(shorthands: list[str]) -> list[AlgebraDescriptor]:
    return [AlgebraDescriptor.parse(text) for text in shorthands]


# ── Preset Manager ────────────────────────────────────────────────────────────

class PresetManager:
    """Manages built-in and user-saved presets, persisted to disk."""

    PRESETS_DIR = Path.home() / ".jordan_cone"

    def __init__(self, presets_dir: Path | None = None):
        self.presets_dir = Path(presets_dir) if presets_dir else self.PRESETS_DIR
        self.presets_file = self.presets_dir / "presets.json"
        self._user_presets: dict[str, dict] = {}
        self._load()

    def _load(self):
        """Load user presets from disk."""
        if self.presets_file.exists():
            try:
                with open(self.presets_file, "r", encoding="utf-8") as f:
                    self._user_presets = json.load(f)
            except (json.JSONDecodeError, OSError):
                self._user_presets = {}

    def _save(self):
        """Save user presets to disk."""
        self.presets_dir.mkdir(parents=True, exist_ok=True)
        with open(self.presets_file, "w", encoding="utf-8") as f:
            json.dump(self._user_presets, f, indent=2, sort_keys=True)

    def all_preset_names(self) -> list[str]:
        """Returns all preset names (built-in first, then user)."""
        names = list(BUILTIN_PRESETS.keys())
        for name in self._user_presets:
            if name not in names:
                names.append(name)
        return names

    def get_data(self, name: str) -> dict | None:
        return BUILTIN_PRESETS.get(name) or self._user_presets.get(name)

    def get(self, name: str, base: RunConfig | None = None) -> RunConfig | None:
        """RunConfig for a preset, layered over *base* when given."""
        data = self.get_data(name)
        if data is None:
            return None
        config = (base or RunConfig()).merged(data)
        config.preset = name
        return config

    def save_user_preset(self, name: str, config: RunConfig):
        """Save the algebra set and sampling knobs of *config* under *name*."""
        self._user_presets[name] = {
            "algebras": list(config.algebras),
            "samples": config.samples,
            "tol_scale": config.tol_scale,
        }
        self._save()

    def delete_user_preset(self, name: str) -> bool:
        """Delete a user preset. Returns True if deleted."""
        if name in self._user_presets:
            del self._user_presets[name]
            self._save()
            return True
        return False

    def is_builtin(self, name: str) -> bool:
        return name in BUILTIN_PRESETS
