#!/usr/bin/env python3
"""Choice-dataset parsing and validation helpers (JSON or YAML files)."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Dict, List, Tuple

try:
    import yaml
except Exception:  # pragma: no cover - optional dependency
    yaml = None

from justify.core import ChoiceDataset, DominanceRelation, WeakOrder, menu_label
from justify.errors import InputError

JSON = Dict[str, Any]


def load_document(path: str) -> Any:
    doc_path = Path(path)
    try:
        raw = doc_path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}", [str(exc)]) from exc
    if doc_path.suffix.lower() in {".json"}:
        try:
            return json.loads(raw)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path} is not valid JSON", [f"line {exc.lineno}: {exc.msg}"]) from exc
    if yaml is None:
        raise RuntimeError("PyYAML is required for YAML datasets. Install with: pip install pyyaml")
    try:
        return yaml.safe_load(raw)
    except yaml.YAMLError as exc:
        raise InputError(f"{path} is not valid YAML", [str(exc)]) from exc


def load_dataset(path: str) -> JSON:
    return load_document(path)


def normalize_dataset(raw: Any) -> JSON:
    if not isinstance(raw, dict):
        return raw
    normalized = dict(raw)
    normalized.setdefault("observations", [])
    if "domain" not in normalized:
        items = set()
        for obs in normalized.get("observations") or []:
            if isinstance(obs, dict) and isinstance(obs.get("menu"), list):
                items.update(str(x) for x in obs["menu"])
        normalized["domain"] = sorted(items)
    return normalized


def _is_token_list(value: Any) -> bool:
    return isinstance(value, list) and all(isinstance(x, str) and x for x in value)


def validate_dataset(raw: Any) -> List[str]:
    errors: List[str] = []
    if not isinstance(raw, dict):
        return ["Dataset must be a mapping/object."]

    domain = raw.get("domain")
    if not _is_token_list(domain):
        errors.append("domain must be a list of nonempty strings")
        domain_set = set()
    else:
        domain_set = set(domain)
        if len(domain_set) != len(domain):
            errors.append("domain lists an alternative twice")

    observations = raw.get("observations")
    seen: Dict[frozenset, frozenset] = {}
    if not isinstance(observations, list):
        errors.append("observations must be a list")
        observations = []
    for index, obs in enumerate(observations):
        if not isinstance(obs, dict):
            errors.append(f"observation #{index}: must be an object with menu and choice")
            continue
        menu, choice = obs.get("menu"), obs.get("choice")
        if not _is_token_list(menu) or not menu:
            errors.append(f"observation #{index}: menu must be a nonempty list of strings")
            continue
        label = menu_label(menu)
        if len(set(menu)) != len(menu):
            errors.append(f"menu {label}: duplicate items")
        if not _is_token_list(choice):
            errors.append(f"menu {label}: choice must be a list of strings")
            continue
        if not choice:
            errors.append(f"menu {label}: empty choice")
        elif not set(choice) <= set(menu):
            errors.append(f"menu {label}: choice outside menu")
        if domain_set and not set(menu) <= domain_set:
            errors.append(f"menu {label}: items outside the domain")
        key, chosen = frozenset(menu), frozenset(choice)
        if key in seen and seen[key] != chosen:
            errors.append(f"menu {label}: contradictory duplicate observations")
        seen.setdefault(key, chosen)

    tiers = raw.get("true_preference")
    if tiers is not None:
        if not isinstance(tiers, list) or not all(_is_token_list(t) and t for t in tiers):
            errors.append("true_preference must be a list of nonempty tiers of strings")
        else:
            flat = [x for t in tiers for x in t]
            if len(flat) != len(set(flat)) or set(flat) != domain_set:
                errors.append("true_preference tiers must partition the domain")

    dominance = raw.get("dominance")
    if dominance is not None:
        if not isinstance(dominance, list) or not all(_is_token_list(p) and len(p) == 2 for p in dominance):
            errors.append("dominance must be a list of [dominator, dominated] pairs")
        else:
            if not {x for p in dominance for x in p} <= domain_set:
                errors.append("dominance mentions items outside the domain")
            try:
                DominanceRelation.from_pairs(dominance)
            except InputError as exc:
                errors.extend(f"dominance: {d}" for d in exc.defects)

    return errors


def parse_dataset(raw: Any) -> ChoiceDataset:
    normalized = normalize_dataset(raw)
    errors = validate_dataset(normalized)
    if errors:
        raise InputError("invalid dataset", errors)
    observations = {frozenset(o["menu"]): frozenset(o["choice"]) for o in normalized["observations"]}
    tiers = normalized.get("true_preference")
    dominance = normalized.get("dominance")
    return ChoiceDataset(
        frozenset(normalized["domain"]),
        observations,
        WeakOrder.from_lists(tiers) if tiers else None,
        DominanceRelation.from_pairs(dominance) if dominance else None,
    )


def load_and_validate(path: str) -> Tuple[JSON, List[str]]:
    dataset = normalize_dataset(load_dataset(path))
    errors = validate_dataset(dataset)
    return dataset, errors


def read_dataset(path: str) -> ChoiceDataset:
    return parse_dataset(load_dataset(path))


def write_dataset(data: ChoiceDataset, path: str) -> Path:
    out = Path(path)
    out.write_text(json.dumps(data.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return out


def parse_tiers(text: str) -> WeakOrder:
    """Parse ``a~b>c>d`` (``>`` separates tiers, ``~`` joins indifferent items)."""
    tiers = [[x.strip() for x in tier.split("~") if x.strip()] for tier in text.split(">")]
    if not text.strip() or any(not t for t in tiers):
        raise InputError("cannot parse preference", [text])
    return WeakOrder.from_lists(tiers)


def parse_dominance(text: str) -> DominanceRelation:
    """Parse ``x>y,z>w`` into dominance pairs."""
    pairs: List[Tuple[str, str]] = []
    for chunk in text.split(","):
        if not chunk.strip():
            continue
        parts = [p.strip() for p in chunk.split(">")]
        if len(parts) != 2 or not all(parts):
            raise InputError("cannot parse dominance pair", [chunk])
        pairs.append((parts[0], parts[1]))
    return DominanceRelation.from_pairs(pairs)


def parse_menu(text: str) -> frozenset:
    items = [x.strip() for x in text.split(",") if x.strip()]
    if not items:
        raise InputError("menu must list at least one item", [text])
    return frozenset(items)
