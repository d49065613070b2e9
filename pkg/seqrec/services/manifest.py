"""Run manifests written next to every command's outputs"""

from pathlib import Path
from typing import Any, Dict, List

from pydantic import BaseModel, ConfigDict, Field

from .archive import ArchiveManager, sha256_file

MANIFEST_NAME = "manifest.json"


class RunManifest(BaseModel):
    """What produced a run directory"""
    model_config = ConfigDict(extra="forbid")

    command: str = Field(..., description="Subcommand name")
    config: Dict[str, Any] = Field(default_factory=dict, description="Effective options and settings snapshot")
    seed: int = 0
    inputs: Dict[str, str] = Field(default_factory=dict, description="Input path -> SHA-256")
    outputs: List[str] = Field(default_factory=list, description="Output file names relative to the run directory")
    wall_seconds: float = Field(0.0, description="Wall time; the only field allowed to differ between reruns")

    def add_input(self, path) -> None:
        self.inputs[str(path)] = sha256_file(path)

    def add_output(self, path, root: Path) -> None:
        path = Path(path)
        try:
            name = str(path.relative_to(root))
        except ValueError:
            name = str(path)
        if name not in self.outputs:
            self.outputs.append(name)


def write_manifest(manifest: RunManifest, archive: ArchiveManager) -> Path:
    return archive.save_json(MANIFEST_NAME, manifest.model_dump(mode="json"))
