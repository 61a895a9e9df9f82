"""Configuration loading from JSON files, environment and flag overrides.

Precedence, lowest first: model defaults, the JSON file, ``POISSONNET_*``
environment variables, command-line flags.
"""

from __future__ import annotations

import json
from collections.abc import Mapping
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from poissonnet.config.models import ExperimentConfig, RuntimeSettings
from poissonnet.exceptions import ConfigNotFoundError, ConfigValidationError


def _format_validation_error(source: str, error: ValidationError) -> ConfigValidationError:
    errors = []
    for item in error.errors():
        loc = ".".join(str(x) for x in item["loc"])
        errors.append(f"  - {loc}: {item['msg']}")
    return ConfigValidationError(f"Invalid configuration in {source}:\n" + "\n".join(errors))


def load_json_file(path: Path) -> dict[str, Any]:
    """Load a JSON object from a file.

    Raises:
        ConfigNotFoundError: If the file doesn't exist
        ConfigValidationError: If the content is not a JSON object
    """
    if not path.is_file():
        raise ConfigNotFoundError(f"File not found: {path}")
    try:
        with path.open(encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigValidationError(f"Invalid JSON in {path}: {e}") from e
    if not isinstance(data, dict):
        raise ConfigValidationError(f"Expected a JSON object at the top of {path}")
    return data


def load_config(path: Path | None = None) -> ExperimentConfig:
    """Load and validate an experiment configuration.

    Args:
        path: JSON config file; None returns the defaults

    Returns:
        Validated configuration

    Raises:
        ConfigNotFoundError: If the file doesn't exist
        ConfigValidationError: If the configuration is invalid

    Examples:
        >>> cfg = load_config()
        >>> cfg = load_config(Path("configs/fig4.json"))
    """
    if path is None:
        return ExperimentConfig()
    data = load_json_file(path)
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as e:
        raise _format_validation_error(path.name, e) from e


def _set_dotted(target: dict[str, Any], dotted: str, value: Any) -> None:
    keys = dotted.split(".")
    node = target
    for key in keys[:-1]:
        child = node.setdefault(key, {})
        if not isinstance(child, dict):
            raise ConfigValidationError(f"Cannot override '{dotted}': '{key}' is not a section")
        node = child
    node[keys[-1]] = value


def merge_overrides(
    cfg: ExperimentConfig, overrides: Mapping[str, Any], skip_none: bool = True
) -> ExperimentConfig:
    """Apply dotted-key overrides (``"output.out_dir"``) and revalidate.

    With ``skip_none`` (the default) ``None`` values are ignored so unset
    flags leave the config untouched; otherwise they clear the field.

    Raises:
        ConfigValidationError: If the result is invalid
    """
    data = cfg.model_dump()
    for key, value in overrides.items():
        if value is not None or not skip_none:
            _set_dotted(data, key, value)
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as e:
        raise _format_validation_error("overrides", e) from e


def resolve_config(
    path: Path | None,
    overrides: Mapping[str, Any] | None = None,
    settings: RuntimeSettings | None = None,
) -> ExperimentConfig:
    """Load a config and layer environment settings and flag overrides on top."""
    cfg = load_config(path)
    settings = settings or RuntimeSettings()
    layered: dict[str, Any] = {}
    if settings.out_dir is not None:
        layered["output.out_dir"] = settings.out_dir
    layered.update(overrides or {})
    if not layered:
        return cfg
    return merge_overrides(cfg, layered)
