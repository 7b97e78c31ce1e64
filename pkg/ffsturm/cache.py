"""Content-addressed JSON cache for expensive per-level results."""

from __future__ import annotations

import hashlib
import json
import logging
from pathlib import Path
from typing import Any, Optional

from .serialization import write_json

_logger = logging.getLogger(__name__)

CODE_VERSION = "0.1"


class ResultCache:
    """Stores one JSON file per key under ``root``; a ``None`` root disables caching.

    Keys are SHA-256 digests of (q, level, operation, parameters, code version).
    """

    def __init__(self, root: Optional[Path]):
        self.root = root

    @property
    def enabled(self) -> bool:
        return self.root is not None

    @staticmethod
    def key(q: int, level: str, operation: str, **params: Any) -> str:
        payload = json.dumps(
            {"q": q, "level": level, "op": operation, "params": params, "version": CODE_VERSION},
            sort_keys=True,
        )
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()

    def _path(self, key: str) -> Path:
        assert self.root is not None
        return self.root / key[:2] / f"{key}.json"

    def get(self, key: str) -> Optional[dict]:
        if self.root is None:
            return None
        path = self._path(key)
        if not path.exists():
            return None
        try:
            return json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError):
            _logger.warning("ignoring unreadable cache entry %s", path)
            return None

    def put(self, key: str, data: dict) -> None:
        if self.root is None:
            return
        path = self._path(key)
        tmp = path.with_suffix(".tmp")
        write_json(tmp, data)
        tmp.replace(path)

    def get_or_compute(self, key: str, compute) -> dict:
        cached = self.get(key)
        if cached is not None:
            _logger.debug("cache hit %s", key[:12])
            return cached
        data = compute()
        self.put(key, data)
        return data
