"""Run configuration: thresholds, scope flags, providers, data paths.

Config files may be TOML or JSON; command-line flags override file
values. Paths left unset fall back to the packaged data files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path

_DATA_DIR = Path(__file__).parent / "data"


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    tau_desc: float = 0.7
    tau_name: float = 0.8
    confidence_threshold: float = 0.5
    scope_multinational: bool = False
    embed_cesm_variable: bool = False
    embedding_provider: str = "hash"
    classifier_provider: str = "builtin"
    point_buffer: float = 0.0
    location_k: int = 10
    location_min_score: float = 0.15
    schema_path: str = str(_DATA_DIR / "schema_attributes.json")
    boundaries_path: str = str(_DATA_DIR / "world_boundaries.geojson")
    resolution_config_path: str = str(_DATA_DIR / "resolution_patterns.json")
    vocabulary_path: str = str(_DATA_DIR / "climate_vocabulary.txt")
    workflows_path: str = str(_DATA_DIR / "workflows.json")
    extra: dict = field(default_factory=dict)

    def validate(self):
        for name in ("tau_desc", "tau_name", "confidence_threshold",
                     "location_min_score"):
            value = getattr(self, name)
            if not (0.0 <= value <= 1.0):
                raise ConfigError(f"{name} must be in [0, 1], got {value}")
        if self.location_k < 1:
            raise ConfigError("location_k must be >= 1")
        for name in ("schema_path", "boundaries_path", "resolution_config_path",
                     "vocabulary_path", "workflows_path"):
            path = Path(getattr(self, name))
            if not path.exists():
                raise ConfigError(f"{name} does not exist: {path}")
        return self


def load_config(path=None, overrides: dict | None = None) -> RunConfig:
    values = {}
    if path is not None:
        path = Path(path)
        raw = path.read_bytes()
        if path.suffix == ".toml":
            data = tomllib.loads(raw.decode("utf-8"))
        else:
            data = json.loads(raw)
        values.update(data)
    if overrides:
        values.update({k: v for k, v in overrides.items() if v is not None})
    known = {f.name for f in fields(RunConfig)}
    init = {k: v for k, v in values.items() if k in known}
    init["extra"] = {k: v for k, v in values.items() if k not in known}
    return RunConfig(**init).validate()
