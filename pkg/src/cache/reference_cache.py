from __future__ import annotations

import hashlib
import json
from pathlib import Path

import structlog

from models.config import ObjectiveSpec
from models.reference import ReferenceEntry

logger = structlog.get_logger(__name__)

CACHE_DIR = Path.cwd() / "cache" / "reference"


def reference_key(spec: ObjectiveSpec, tol: float) -> str:
    """Stable digest of the active objective parameters and tolerance."""
    active = getattr(spec, spec.kind.value).model_dump(mode="json")
    payload = json.dumps({"kind": spec.kind.value, "params": active, "tol": tol}, sort_keys=True)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]


def get_cached_reference(key: str, cache_dir: Path | None = None) -> ReferenceEntry | None:
    """Retrieve a cached reference minimizer by key."""
    cache_file = (cache_dir or CACHE_DIR) / f"{key}.json"
    if cache_file.exists():
        try:
            return ReferenceEntry.model_validate_json(cache_file.read_text(encoding="utf-8"))
        except Exception as e:
            logger.warning("cache_read_failed", key=key, error=str(e))
            return None
    return None


def cache_reference(entry: ReferenceEntry, cache_dir: Path | None = None) -> None:
    """Store a reference minimizer for reuse across runs."""
    directory = cache_dir or CACHE_DIR
    try:
        directory.mkdir(parents=True, exist_ok=True)
        cache_file = directory / f"{entry.key}.json"
        cache_file.write_text(entry.model_dump_json(indent=2), encoding="utf-8")
        logger.info("reference_cached", key=entry.key, cache_file=str(cache_file))
    except Exception as e:
        logger.warning("cache_write_failed", key=entry.key, error=str(e))
