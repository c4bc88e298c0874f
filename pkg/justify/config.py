#!/usr/bin/env python3
"""Runtime settings: defaults, optional YAML/JSON settings file, env overrides."""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, replace
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple

try:
    import yaml
except Exception:  # pragma: no cover - optional dependency
    yaml = None

from justify.errors import InputError

JSON = Dict[str, Any]

ENV_MAX_ENUM = "JUSTIFY_MAX_ENUM"


@dataclass(frozen=True)
class Settings:
    enumeration_limit: int = 7
    subset_cap: int = 12
    epsilon: float = 1e-7
    pivot_tolerance: float = 1e-9
    grid_step: float = 0.05
    max_prizes: int = 4
    max_orders_domain: int = 8
    seed: int = 0

    def to_dict(self) -> JSON:
        return asdict(self)


DEFAULTS = Settings()


def load_settings(path: str) -> JSON:
    settings_path = Path(path)
    raw = settings_path.read_text(encoding="utf-8")
    if settings_path.suffix.lower() in {".json"}:
        return json.loads(raw)
    if yaml is None:
        raise RuntimeError("PyYAML is required for YAML settings. Install with: pip install pyyaml")
    return yaml.safe_load(raw) or {}


def normalize_settings(raw: Optional[Mapping[str, Any]]) -> JSON:
    normalized = dict(raw or {})
    for key, value in DEFAULTS.to_dict().items():
        normalized.setdefault(key, value)
    return normalized


def validate_settings(raw: Any) -> List[str]:
    errors: List[str] = []
    if not isinstance(raw, dict):
        return ["Settings must be a mapping/object."]

    known = set(DEFAULTS.to_dict())
    for key in sorted(set(raw) - known):
        errors.append(f"unknown setting '{key}'")

    for key in ("enumeration_limit", "subset_cap", "max_prizes", "max_orders_domain"):
        value = raw.get(key)
        if not isinstance(value, int) or isinstance(value, bool) or value < 1:
            errors.append(f"{key} must be a positive integer")
    if not isinstance(raw.get("seed"), int) or isinstance(raw.get("seed"), bool):
        errors.append("seed must be an integer")

    for key in ("epsilon", "pivot_tolerance"):
        value = raw.get(key)
        if not isinstance(value, (int, float)) or isinstance(value, bool) or not 0 < value < 1e-2:
            errors.append(f"{key} must be a small positive number")
    step = raw.get("grid_step")
    if not isinstance(step, (int, float)) or isinstance(step, bool) or not 0 < step <= 0.5:
        errors.append("grid_step must be in (0, 0.5]")
    elif abs(round(1.0 / step) * step - 1.0) > 1e-9:
        errors.append("grid_step must divide 1")

    if isinstance(raw.get("max_prizes"), int) and raw["max_prizes"] > 4:
        errors.append("max_prizes above 4 is not supported by the dual-cone computations")
    return errors


def apply_env(raw: JSON, environ: Optional[Mapping[str, str]] = None) -> Tuple[JSON, List[str]]:
    env = os.environ if environ is None else environ
    merged = dict(raw)
    errors: List[str] = []
    value = env.get(ENV_MAX_ENUM)
    if value not in (None, ""):
        try:
            merged["enumeration_limit"] = int(value)
        except ValueError:
            errors.append(f"{ENV_MAX_ENUM} must be an integer, got {value!r}")
    return merged, errors


def load_and_validate(path: Optional[str] = None, environ: Optional[Mapping[str, str]] = None) -> Tuple[JSON, List[str]]:
    raw = load_settings(path) if path else {}
    settings = normalize_settings(raw)
    settings, env_errors = apply_env(settings, environ)
    return settings, env_errors + validate_settings(settings)


def resolve(path: Optional[str] = None, environ: Optional[Mapping[str, str]] = None, **overrides: Any) -> Settings:
    """Build Settings from file, env and explicit overrides (in that precedence order)."""
    raw, errors = load_and_validate(path, environ)
    if errors:
        raise InputError("invalid settings", errors)
    settings = Settings(**raw)
    clean = {k: v for k, v in overrides.items() if v is not None}
    if not clean:
        return settings
    settings = replace(settings, **clean)
    errors = validate_settings(settings.to_dict())
    if errors:
        raise InputError("invalid settings", errors)
    return settings
