"""Run configuration: one JSON document holding every tunable constant.

Example::

    {
      "rules_path": "rules/custom.far",
      "fuzz": {"overlap": 0.2, "boundaries": {"likelihood": [1.75, 3.43]},
               "desirability_bins": [0.8333, 1.6667, 2.5, 3.3333, 4.1667],
               "agency_threshold": 2.5},
      "intensity": {"high": 0.875, "medium": 0.625, "low": 0.375},
      "geometry": {"calm": {"mean_angle_deg": 318.12}},
      "label3_eps": 0.1,
      "strength_weighted": false,
      "binning_mode": "kmeans",
      "bins_path": "bins.json",
      "output_format": "json"
    }

Every key is optional. Relative paths resolve against the config file's
directory.
"""

from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from types import MappingProxyType
from typing import Mapping

from .appraisal import FuzzConfig, Variable
from .emotions import Emotion
from .errors import ConfigError
from .pa_space import DEFAULT_GEOMETRY, DEFAULT_LABEL3_EPS, EmotionGeometry, IntensityScale

CONFIG_ENV = "COGNIPLEASURE_CONFIG"


class BinningMode(str, Enum):
    BINARY = "binary"
    SOFT = "soft"
    STRICT = "strict"
    KMEANS = "kmeans"
    FILE = "file"


_KEYS = {
    "rules_path", "fuzz", "intensity", "geometry", "label3_eps", "strength_weighted",
    "binning_mode", "bins_path", "output_format",
}


@dataclass(frozen=True)
class RunConfig:
    rules_path: Path | None = None
    fuzz: FuzzConfig = field(default_factory=FuzzConfig)
    intensity: IntensityScale = field(default_factory=IntensityScale)
    geometry: Mapping[Emotion, EmotionGeometry] = DEFAULT_GEOMETRY
    label3_eps: float = DEFAULT_LABEL3_EPS
    strength_weighted: bool = False
    binning_mode: BinningMode = BinningMode.KMEANS
    bins_path: Path | None = None
    output_format: str = "json"

    def __post_init__(self) -> None:
        if self.label3_eps < 0:
            raise ConfigError("label3_eps must be non-negative")
        if self.output_format not in ("json", "csv"):
            raise ConfigError(f"output_format must be 'json' or 'csv', got {self.output_format!r}")
        object.__setattr__(self, "binning_mode", BinningMode(self.binning_mode))
        for name in ("rules_path", "bins_path"):
            path = getattr(self, name)
            if path is not None and not Path(path).is_file():
                raise ConfigError(f"{name}: no such file {str(path)!r}")
        if self.binning_mode is BinningMode.FILE and self.bins_path is None:
            raise ConfigError("binning_mode 'file' requires bins_path")

    def replace(self, **changes) -> RunConfig:
        return dataclasses.replace(self, **changes)


def _geometry(doc: Mapping) -> Mapping[Emotion, EmotionGeometry]:
    table = dict(DEFAULT_GEOMETRY)
    for name, row in doc.items():
        try:
            emotion = Emotion(name)
        except ValueError:
            raise ConfigError(f"geometry: unknown emotion {name!r}") from None
        base = table[emotion]
        table[emotion] = EmotionGeometry(
            emotion,
            float(row.get("mean_angle_deg", base.mean_angle_deg)),
            float(row.get("sd_deg", base.sd_deg)),
            float(row.get("pleasure", base.table_pleasure)),
            float(row.get("arousal", base.table_arousal)),
        )
    return MappingProxyType(table)


def config_from_dict(doc: Mapping, base_dir: Path | None = None) -> RunConfig:
    unknown = set(doc) - _KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    base_dir = base_dir or Path.cwd()

    def path(key):
        value = doc.get(key)
        if value is None:
            return None
        p = Path(value)
        return p if p.is_absolute() else base_dir / p

    try:
        return RunConfig(
            rules_path=path("rules_path"),
            fuzz=FuzzConfig.from_dict(doc.get("fuzz", {})),
            intensity=IntensityScale(**doc.get("intensity", {})),
            geometry=_geometry(doc.get("geometry", {})),
            label3_eps=float(doc.get("label3_eps", DEFAULT_LABEL3_EPS)),
            strength_weighted=bool(doc.get("strength_weighted", False)),
            binning_mode=doc.get("binning_mode", BinningMode.KMEANS.value),
            bins_path=path("bins_path"),
            output_format=doc.get("output_format", "json"),
        )
    except TypeError as exc:
        raise ConfigError(str(exc)) from None
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from None


def load_config(path: str | Path | None = None) -> RunConfig:
    """Read ``path``, else ``$COGNIPLEASURE_CONFIG``, else return defaults."""
    if path is None:
        path = os.environ.get(CONFIG_ENV) or None
    if path is None:
        return RunConfig()
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {str(path)!r}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: top level must be an object")
    return config_from_dict(doc, path.parent)


def load_bins(path: str | Path) -> dict[Variable, tuple[float, float]]:
    """Read a ``bins fit`` document: variable name to its two boundaries."""
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read bins file {str(path)!r}: {exc}") from None
    out = {}
    for name, pair in doc.items():
        try:
            var = Variable(name.removeprefix("gold_"))
        except ValueError:
            raise ConfigError(f"bins file: unknown variable {name!r}") from None
        if len(pair) != 2:
            raise ConfigError(f"bins file: {name} needs exactly two boundaries for three-level binning")
        out[var] = (float(pair[0]), float(pair[1]))
    return out
