#!/usr/bin/env python3
"""Report envelopes and deterministic JSON output."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Dict, List, Optional

from justify import __version__

JSON = Dict[str, Any]


def dump(report: Any) -> str:
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def write_report(path: str, report: Any) -> Path:
    out = Path(path)
    if out.parent and not out.parent.exists():
        out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(dump(report), encoding="utf-8")
    return out


def envelope(command: str, status: str, body: Optional[JSON] = None) -> JSON:
    report: JSON = {"command": command, "status": status, "version": __version__}
    report.update(body or {})
    return report


def error_report(command: str, message: str, defects: Optional[List[str]] = None) -> JSON:
    return envelope(command, "error", {"error": message, "defects": list(defects or [])})
