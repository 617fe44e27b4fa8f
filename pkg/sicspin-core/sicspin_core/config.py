import logging
import os
from typing import Any, Dict, Optional

import tomlkit
from jsonschema import Draft7Validator

from .exceptions import ConfigError

logger = logging.getLogger(__name__)


def _merge(a: dict, b: dict, path=None):
    """
    Recursively merges b into a, with b taking precedence.

    From: https://stackoverflow.com/a/7205107/965332
    """
    if path is None:
        path = []
    for key in b:
        if key in a:
            if isinstance(a[key], dict) and isinstance(b[key], dict):
                _merge(a[key], b[key], path + [str(key)])
            elif a[key] == b[key]:
                pass  # same leaf value
            else:
                a[key] = b[key]
        else:
            a[key] = b[key]
    return a


def parse_toml(text: str, source: str = "<string>") -> Dict[str, Any]:
    try:
        return tomlkit.parse(text).unwrap()
    except tomlkit.exceptions.ParseError as e:
        raise ConfigError(f"Invalid TOML in {source}: {e}") from e


def validate_config(config: Dict[str, Any], schema: dict, source: str) -> None:
    """Raises ConfigError listing every violation, unknown keys included."""
    errors = sorted(
        Draft7Validator(schema).iter_errors(config), key=lambda e: list(e.path)
    )
    if errors:
        details = "; ".join(
            f"{'.'.join(str(p) for p in e.path) or '<root>'}: {e.message}"
            for e in errors
        )
        raise ConfigError(f"Invalid config {source}: {details}")


def load_config_toml(
    default_config: str,
    path: Optional[str] = None,
    schema: Optional[dict] = None,
) -> Dict[str, Any]:
    """
    Parses the default config and merges the file at `path` over it.

    Only explicitly given files are read, so identical inputs always give
    identical configs. The override file is validated on its own before
    merging so that typo'd keys are rejected instead of silently ignored.
    """
    config = parse_toml(default_config, "defaults")

    if path is not None:
        if not os.path.isfile(path):
            raise ConfigError(f"Config file not found: {path}")
        with open(path) as f:
            override = parse_toml(f.read(), path)
        if schema is not None:
            validate_config(override, schema, path)
        logger.debug(f"Merging config overrides from {path}")
        config = _merge(config, override)

    if schema is not None:
        validate_config(config, schema, "after merge")
    return config
