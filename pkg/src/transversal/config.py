"""Layered settings for transversal.

Lookup order for every key, first hit wins:

- ``TRANSVERSAL_<DOTTED_KEY>`` in the environment (read on each lookup)
- ``config.yaml`` in the project root, else in the platform config dir
- ``default.yaml`` shipped inside the package

The pipeline constants end up in a frozen ``PipelineConfig``; the default
seed can be set on its own with ``TRANSVERSAL_SEED``.
"""

import os
from collections.abc import Mapping
from pathlib import Path
from typing import Any

import yaml
from dotenv import load_dotenv
from platformdirs import user_config_dir, user_data_dir

from transversal.models import PipelineConfig

# .env in the working directory, for local experiments
load_dotenv()

ENV_PREFIX = "TRANSVERSAL_"
APP_NAME = "transversal"
_MISSING = object()

# PipelineConfig field -> dotted config key
_PIPELINE_KEYS = {
    "alpha": "pipeline.alpha",
    "beta": "pipeline.beta",
    "beta_bar": "pipeline.beta_bar",
    "gamma": "pipeline.gamma",
    "eps": "pipeline.eps",
    "eta": "pipeline.eta",
    "mu": "pipeline.mu",
    "k": "pipeline.k",
    "C": "pipeline.C",
    "retries": "pipeline.retries",
    "slack": "pipeline.slack",
    "embed_budget": "pipeline.embed_budget",
    "search_budget": "pipeline.search_budget",
    "enumeration_cap": "pipeline.enumeration_cap",
    "min_pipeline_vertices": "pipeline.min_pipeline_vertices",
    "core_size_factor": "absorber.core_size_factor",
    "densify_rounds": "absorber.densify_rounds",
    "debug": "absorber.debug",
}

_TRUE = frozenset({"true", "yes", "on"})
_FALSE = frozenset({"false", "no", "off"})


def _read_yaml(path: Path) -> dict:
    with open(path, "r", encoding="utf-8") as f:
        return yaml.safe_load(f) or {}


def _deep_merge(base: Mapping, override: Mapping) -> dict:
    """Nested dicts merge key by key; anything else in ``override`` replaces."""
    merged = dict(base)
    for key, value in override.items():
        current = merged.get(key)
        if isinstance(current, Mapping) and isinstance(value, Mapping):
            merged[key] = _deep_merge(current, value)
        else:
            merged[key] = value
    return merged


def _env_name(key_path: str) -> str:
    return ENV_PREFIX + key_path.replace(".", "_").upper()


class Config:
    """Merged view over bundled defaults, an optional user file and the environment.

    Files are read once, at construction. The environment is consulted on every
    ``get`` so tests and scripts can override a value after start-up.

    Usage:
        >>> from transversal.config import get_config
        >>> get_config().get("pipeline.retries")
        20
        >>> get_config().get_pipeline_config(seed=3).rng_seed
        3
    """

    def __init__(self):
        bundled = _read_yaml(Path(__file__).with_name("default.yaml"))
        self._settings = _deep_merge(bundled, self._load_user_config())

    def _load_user_config(self) -> dict:
        """First user file found, or an empty dict.

        Candidates, in order:
            - ``<project root>/config.yaml`` (editable installs)
            - ``user_config_dir("transversal")/config.yaml``, e.g.
              ~/.config/transversal/config.yaml on Linux
        """
        project_root = Path(__file__).resolve().parents[2]
        candidates = (
            project_root / "config.yaml",
            Path(user_config_dir(APP_NAME, appauthor=False)) / "config.yaml",
        )
        for path in candidates:
            if path.is_file():
                return _read_yaml(path)
        return {}

    def get(self, key_path: str, default: Any = None) -> Any:
        """Value for a dotted key such as ``"absorber.core_size_factor"``.

        ``TRANSVERSAL_ABSORBER_CORE_SIZE_FACTOR`` wins when set; its string is
        coerced by ``_parse_env_value``. Missing keys give ``default``.
        """
        raw = os.environ.get(_env_name(key_path))
        if raw is not None:
            return self._parse_env_value(raw)

        node: Any = self._settings
        for part in key_path.split("."):
            node = node.get(part, _MISSING) if isinstance(node, Mapping) else _MISSING
            if node is _MISSING:
                return default
        return node

    @staticmethod
    def _parse_env_value(value: str) -> Any:
        """Coerce an environment string: yes/no words to bool, then float or int.

        "0" and "1" stay integers (seeds, worker counts). Strings that are
        none of these come back unchanged.
        """
        lowered = value.strip().lower()
        if lowered in _TRUE:
            return True
        if lowered in _FALSE:
            return False
        numeric = float if ("." in lowered or "e" in lowered) else int
        try:
            return numeric(value)
        except ValueError:
            return value

    def get_seed(self) -> int:
        """Default seed: TRANSVERSAL_SEED, then pipeline.seed, then 0."""
        explicit = os.environ.get(f"{ENV_PREFIX}SEED")
        if explicit is not None:
            return int(explicit)
        return int(self.get("pipeline.seed") or 0)

    def get_pipeline_config(self, seed: int | None = None) -> PipelineConfig:
        """Validated, frozen pipeline constants for one run.

        Args:
            seed: Seed for this run; ``get_seed()`` when omitted.

        Raises:
            pydantic.ValidationError: The configured constants break
                0 < gamma < beta < alpha < 1 or another field bound.
        """
        values = {
            field: value
            for field, key in _PIPELINE_KEYS.items()
            if (value := self.get(key)) is not None
        }
        values["rng_seed"] = self.get_seed() if seed is None else seed
        return PipelineConfig(**values)

    def get_runs_path(self) -> Path:
        """Location of ``runs.jsonl``.

        ``TRANSVERSAL_OUTPUT_RUNS_DIR`` first, then ``output.runs_dir``, then
        ``user_data_dir("transversal")`` (~/.local/share/transversal on Linux).
        """
        directory = os.environ.get(f"{ENV_PREFIX}OUTPUT_RUNS_DIR") or self.get("output.runs_dir")
        if directory is None:
            directory = user_data_dir(APP_NAME, appauthor=False)
        return Path(directory) / "runs.jsonl"


_config: Config | None = None


def get_config() -> Config:
    """Process-wide Config, built on first use.

    Sweep workers do not call this; they receive a dumped PipelineConfig from
    the parent process.
    """
    global _config
    if _config is None:
        _config = Config()
    return _config
