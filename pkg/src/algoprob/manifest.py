"""Run manifests: everything needed to reproduce an output file.

A manifest is written next to each output as ``<out>.manifest.json``. It holds
no timestamps and no worker count, so identical commands produce identical
manifests.
"""

import hashlib
import json
import logging
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from importlib import metadata
from pathlib import Path
from typing import Any

logger = logging.getLogger(__name__)

MANIFEST_SUFFIX = ".manifest.json"
TRACKED_PACKAGES = ("algoprob", "numpy", "scipy", "pandas", "click")


@dataclass(frozen=True)
class RunManifest:
    """Record of one CLI run."""

    command: str
    params: Mapping[str, Any]
    config: Mapping[str, Any]
    seed: int | None
    cutoff: int | None
    versions: Mapping[str, str]
    outputs: Mapping[str, str] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        """Return the JSON document."""
        return {
            "command": self.command,
            "params": dict(self.params),
            "config": dict(self.config),
            "seed": self.seed,
            "cutoff": self.cutoff,
            "versions": dict(self.versions),
            "outputs": dict(self.outputs),
        }

    def to_json(self) -> str:
        """Render the manifest with sorted keys."""
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def digest_file(path: Path) -> str:
    """Return the hex sha256 of ``path``."""
    digest = hashlib.sha256()
    with path.open("rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def package_versions() -> dict[str, str]:
    """Return installed versions of algoprob and its numeric stack."""
    versions = {}
    for name in TRACKED_PACKAGES:
        try:
            versions[name] = metadata.version(name)
        except metadata.PackageNotFoundError:
            versions[name] = "unknown"
    return versions


def manifest_path(out: Path) -> Path:
    """Return where the manifest for ``out`` goes."""
    return out.with_name(out.name + MANIFEST_SUFFIX)


def build_manifest(
    command: str,
    params: Mapping[str, Any],
    config: Mapping[str, Any],
    outputs: Iterable[Path],
    seed: int | None = None,
    cutoff: int | None = None,
) -> RunManifest:
    """
    Describe a finished run.

    Args:
        command: The command path, e.g. ``algoprob ctm dist``.
        params: Command parameters that influence the output.
        config: Settings snapshot.
        outputs: Files written by the run; each is listed by name with its digest.
        seed: Random seed, if any.
        cutoff: Step cutoff used, if any.

    Returns:
        The manifest.
    """
    return RunManifest(
        command=command,
        params=params,
        config=config,
        seed=seed,
        cutoff=cutoff,
        versions=package_versions(),
        outputs={path.name: digest_file(path) for path in outputs},
    )


def write_manifest(manifest: RunManifest, out: Path) -> Path:
    """Write the manifest for output ``out`` and return its path."""
    path = manifest_path(out)
    path.write_text(manifest.to_json(), encoding="utf-8")
    logger.info(f"Manifest written to {path}")
    return path
