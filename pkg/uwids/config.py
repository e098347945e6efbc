# 2026/09/03
"""
config.py - Configuration files.

Defines functions 'load_config' and 'dump_config', to read and write the
YAML files accepted by the '--config' option of the command line.

A file is either a flat mapping of simulation parameters, or a mapping of
sections ('sim', 'pipeline', 'forest'), each one mirroring the fields of the
matching configuration class.

"""

from pathlib import Path
from typing import Any

import yaml

from uwids.errors import ConfigurationError

SECTIONS = ("sim", "pipeline", "forest")


def load_config(path: str | Path) -> dict[str, dict[str, Any]]:
    """Loads a configuration file into a mapping of sections.

    Every section in SECTIONS is present in the result, empty when the file
    does not mention it. A flat file is read as the 'sim' section.

    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Configuration file '{path}' not found.")
    with open(path, encoding="utf-8") as f:
        try:
            raw = yaml.safe_load(f)
        except yaml.YAMLError as exc:
            raise ConfigurationError(f"Cannot parse '{path}': {exc}") from exc

    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigurationError(f"'{path}' must contain a mapping at top level.")

    sections = {name: {} for name in SECTIONS}
    if any(key in SECTIONS for key in raw):
        unknown = [key for key in raw if key not in SECTIONS]
        if unknown:
            raise ConfigurationError(
                f"Unknown configuration sections: {', '.join(map(str, unknown))}."
            )
        for name, values in raw.items():
            if values is None:
                continue
            if not isinstance(values, dict):
                raise ConfigurationError(f"Section '{name}' must be a mapping.")
            sections[name] = dict(values)
    else:
        sections["sim"] = dict(raw)
    return sections


def dump_config(path: str | Path, sections: dict[str, dict[str, Any]]) -> Path:
    """Writes a mapping of sections, skipping empty ones."""
    path = Path(path)
    content = {name: values for name, values in sections.items() if values}
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        yaml.safe_dump(content, f, sort_keys=True)
    return path
