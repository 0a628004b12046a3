"""On-disk result cache keyed by a hash of the run manifest."""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__

CACHE_ENV = "SLECOEF_CACHE_DIR"


def cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    return Path(env) if env else Path.home() / ".cache" / "slecoef"


@dataclass
class RunManifest:
    """What was asked for; the hash ignores the timestamp."""

    command: str
    params: dict
    version: str = __version__
    created: float = field(default_factory=time.time)

    def canonical(self) -> str:
        body = {"command": self.command, "params": self.params, "version": self.version}
        return json.dumps(body, sort_keys=True, separators=(",", ":"))

    @property
    def digest(self) -> str:
        return hashlib.sha256(self.canonical().encode()).hexdigest()

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "params": self.params,
            "version": self.version,
            "hash": self.digest,
            "created": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime(self.created)),
        }


def _atomic_write(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


class ResultCache:
    def __init__(self, root: Path | None = None):
        self.root = Path(root) if root is not None else cache_dir()

    def _entry(self, manifest: RunManifest) -> Path:
        return self.root / manifest.digest

    def get(self, manifest: RunManifest) -> bytes | None:
        path = self._entry(manifest) / "artifact"
        try:
            return path.read_bytes()
        except OSError:
            return None

    def put(self, manifest: RunManifest, artifact: bytes) -> None:
        entry = self._entry(manifest)
        _atomic_write(entry / "artifact", artifact)
        _atomic_write(entry / "manifest.json", json.dumps(manifest.to_json(), indent=2).encode())

    def fetch(self, manifest: RunManifest, compute, enabled: bool = True) -> bytes:
        """Cached bytes if present, else ``compute()`` stored and returned."""
        if enabled:
            hit = self.get(manifest)
            if hit is not None:
                return hit
        data = compute()
        if enabled:
            try:
                self.put(manifest, data)
            except OSError:
                # read-only or full cache dir: the result is still good
                pass
        return data
