"""On-disk cache of synthesized gadgets.

Set KSFORGE_CACHE to a directory to enable it.  Entries hold vectors only;
certificates are always recomputed after loading, so a stale or edited
entry can cost time but never a wrong verdict.
"""
from __future__ import annotations

import json
import os
from pathlib import Path

from ..geometry import VectorSet


def cache_dir() -> Path | None:
    d = os.environ.get("KSFORGE_CACHE")
    if not d:
        return None
    p = Path(d)
    p.mkdir(parents=True, exist_ok=True)
    return p


def load(key: str) -> dict | None:
    d = cache_dir()
    if d is None or not (d / f"{key}.json").exists():
        return None
    try:
        return json.loads((d / f"{key}.json").read_text())
    except (OSError, ValueError):
        return None


def store(key: str, payload: dict) -> None:
    d = cache_dir()
    if d is None:
        return
    tmp = d / f".{key}.tmp"
    tmp.write_text(json.dumps(payload))
    tmp.replace(d / f"{key}.json")


def vectors_of(payload: dict) -> VectorSet:
    return VectorSet.from_dict(payload["vectors"])
