"""CSV artifacts and the run manifest.

CSV files use a header row, minimal RFC 4180 quoting and LF line endings.
Floats are written with ``repr`` (shortest round-trip form) so identical
results give identical bytes. The manifest carries no timestamps for the
same reason.
"""

from __future__ import annotations

import csv
import hashlib
import json
import logging
from collections.abc import Iterable, Sequence
from pathlib import Path
from typing import Any

from poissonnet import __version__
from poissonnet.config.models import ExperimentConfig
from poissonnet.exceptions import ArtifactError

logger = logging.getLogger(__name__)

MANIFEST_NAME = "run-manifest.json"


def _cell(value: object) -> object:
    if isinstance(value, float):
        return repr(value)
    return value


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[object]]) -> Path:
    """Write rows under a header.

    Raises:
        ArtifactError: If the file cannot be written
    """
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f, lineterminator="\n", quoting=csv.QUOTE_MINIMAL)
            writer.writerow(header)
            for row in rows:
                writer.writerow([_cell(v) for v in row])
    except OSError as e:
        raise ArtifactError(f"Cannot write {path}: {e}") from e
    logger.info("Wrote %s", path)
    return path


def sha256_of(path: Path) -> str:
    digest = hashlib.sha256()
    try:
        with path.open("rb") as f:
            for block in iter(lambda: f.read(1 << 16), b""):
                digest.update(block)
    except OSError as e:
        raise ArtifactError(f"Cannot read {path}: {e}") from e
    return digest.hexdigest()


def write_manifest(
    out_dir: Path,
    command: str,
    cfg: ExperimentConfig,
    artifacts: Sequence[Path],
    extra: dict[str, Any] | None = None,
) -> Path:
    """Write ``run-manifest.json`` describing a run and its artifacts.

    Raises:
        ArtifactError: If the manifest cannot be written
    """
    manifest: dict[str, Any] = {
        "package": "poissonnet",
        "version": __version__,
        "command": command,
        "seed": cfg.seed,
        "config": cfg.model_dump(mode="json"),
        "artifacts": [
            {"path": p.relative_to(out_dir).as_posix(), "sha256": sha256_of(p)}
            for p in artifacts
        ],
    }
    if extra:
        manifest["summary"] = extra
    path = out_dir / MANIFEST_NAME
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        path.write_text(
            json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8", newline="\n"
        )
    except OSError as e:
        raise ArtifactError(f"Cannot write {path}: {e}") from e
    return path
