"""Append-only JSON-lines result cache keyed by a content hash.

A record's key hashes the command, its parameters, the prime, the seed and
the tool version, so a replay is byte-for-byte the original result.  The
file is only ever appended to; on duplicate keys the first record wins.
"""

from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path


def default_cache_dir() -> Path:
    env = os.environ.get("GRSECANT_CACHE_DIR")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "grsecant"


def cache_key(payload: dict) -> str:
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


class ResultCache:
    def __init__(self, directory: Path | None = None, enabled: bool = True):
        self.directory = Path(directory) if directory else default_cache_dir()
        self.path = self.directory / "results.jsonl"
        self.enabled = enabled
        self._index: dict[str, dict] | None = None

    def _load(self) -> dict[str, dict]:
        if self._index is None:
            self._index = {}
            if self.path.exists():
                with open(self.path, "r", encoding="utf-8") as fh:
                    for line in fh:
                        line = line.strip()
                        if not line:
                            continue
                        entry = json.loads(line)
                        self._index.setdefault(entry["key"], entry["record"])
        return self._index

    def get(self, key: str) -> dict | None:
        if not self.enabled:
            return None
        return self._load().get(key)

    def put(self, key: str, record: dict) -> None:
        self.directory.mkdir(parents=True, exist_ok=True)
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps({"key": key, "record": record}, sort_keys=True) + "\n")
        self._load().setdefault(key, record)
