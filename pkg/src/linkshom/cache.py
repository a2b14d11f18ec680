"""On-disk cache of slice dimensions and boundary ranks.

Only integers are stored, never matrices.  Keys include the engine
version and the parity of d-1 (dimensions and ranks depend on d only
through that parity).  Each entry is one small JSON file named by the
sha256 of its key, written atomically; a second writer of the same key
writes the same bytes, so concurrent workers cannot corrupt the cache.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

from . import __version__
from .arnold import GenParity, as_parity

ENV_VAR = "LINKSHOM_CACHE"


class RankCache:
    def __init__(self, root: str | os.PathLike, version: str = __version__):
        self.root = Path(root)
        self.version = version
        self.root.mkdir(parents=True, exist_ok=True)

    @classmethod
    def from_env(cls, override: str | None = None) -> "RankCache | None":
        path = override or os.environ.get(ENV_VAR)
        return cls(path) if path else None

    def _key(self, m, n, parity, t, p, kind) -> dict:
        par = as_parity(parity)
        return {"version": self.version, "m": m, "n": n, "parity": par.value, "t": t, "p": p, "kind": kind}

    def _path(self, key: dict) -> Path:
        digest = hashlib.sha256(json.dumps(key, sort_keys=True).encode()).hexdigest()
        return self.root / f"{digest}.json"

    def get(self, m: int, n: int, parity: GenParity, t: int, p: int, kind: str) -> int | None:
        key = self._key(m, n, parity, t, p, kind)
        path = self._path(key)
        try:
            data = json.loads(path.read_text())
        except (FileNotFoundError, json.JSONDecodeError):
            return None
        if data.get("key") != key:
            return None
        return int(data["value"])

    def put(self, m: int, n: int, parity: GenParity, t: int, p: int, kind: str, value: int):
        key = self._key(m, n, parity, t, p, kind)
        path = self._path(key)
        if path.exists():
            return
        payload = json.dumps({"key": key, "value": int(value)}, sort_keys=True)
        fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            fh.write(payload)
        os.replace(tmp, path)

    def __len__(self) -> int:
        return sum(1 for _ in self.root.glob("*.json"))
