"""Run manifests: every training or evaluation command records what ran."""

from __future__ import annotations

import hashlib
import json
import platform
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path


def file_hash(path: str | Path) -> str:
    h = hashlib.sha256()
    with Path(path).open("rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()[:16]


def _versions() -> dict[str, str]:
    import numpy
    import torch
    import transformers

    from . import __version__

    return {
        "picoscreen": __version__,
        "torch": torch.__version__,
        "transformers": transformers.__version__,
        "numpy": numpy.__version__,
        "python": platform.python_version(),
    }


@dataclass
class RunManifest:
    command: str
    parameters: dict
    seeds: dict = field(default_factory=dict)
    corpus_hashes: dict = field(default_factory=dict)
    artifacts: list[str] = field(default_factory=list)
    wall_clock_s: float = 0.0
    versions: dict = field(default_factory=_versions)
    started_at: str = field(default_factory=lambda: time.strftime("%Y-%m-%dT%H:%M:%S%z"))

    def write(self, path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(asdict(self), indent=2, default=str) + "\n", encoding="utf-8")
        return path


class ManifestTimer:
    """Context manager measuring wall clock for a manifest."""

    def __init__(self, manifest: RunManifest):
        self.manifest = manifest

    def __enter__(self) -> RunManifest:
        self._t0 = time.time()
        return self.manifest

    def __exit__(self, *exc) -> None:
        self.manifest.wall_clock_s = round(time.time() - self._t0, 3)
