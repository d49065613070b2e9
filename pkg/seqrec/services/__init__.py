"""Services module"""

from .archive import (
    ArchiveManager,
    atomic_write_text,
    load_dataset,
    load_model,
    save_dataset,
    save_model,
    sha256_file,
)
from .manifest import MANIFEST_NAME, RunManifest, write_manifest

__all__ = [
    "ArchiveManager",
    "atomic_write_text",
    "load_dataset",
    "load_model",
    "save_dataset",
    "save_model",
    "sha256_file",
    "MANIFEST_NAME",
    "RunManifest",
    "write_manifest",
]
