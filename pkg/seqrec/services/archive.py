"""
Archive Service
Handles dataset/model persistence and JSON artifacts under one output directory
"""

import hashlib
import json
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, Union

from loguru import logger

from ..models.schemas import Dataset, Model

PathLike = Union[str, Path]


def atomic_write_text(path: PathLike, text: str) -> Path:
    """
    Write text through a temporary file in the same directory, then os.replace

    Args:
        path: Destination file
        text: Contents (UTF-8)

    Returns:
        Path: The destination
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise
    return path


def sha256_file(path: PathLike) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


# ============ Dataset / Model ============

def save_dataset(dataset: Dataset, path: PathLike) -> Path:
    """Canonical JSON of the Dataset model (fields in declaration order)"""
    return atomic_write_text(path, dataset.model_dump_json(indent=2) + "\n")


def load_dataset(path: PathLike) -> Dataset:
    with open(path, "r", encoding="utf-8") as f:
        return Dataset.model_validate_json(f.read())


def save_model(model: Model, path: PathLike) -> Path:
    return atomic_write_text(path, model.model_dump_json(indent=2) + "\n")


def load_model(path: PathLike) -> Model:
    with open(path, "r", encoding="utf-8") as f:
        return Model.model_validate_json(f.read())


class ArchiveManager:
    """Manages the artifacts of one run directory"""

    def __init__(self, root: PathLike = "output"):
        """
        Initialize ArchiveManager

        Args:
            root: Run directory; created if missing
        """
        self.root = Path(root)
        self._ensure_dir()

    def _ensure_dir(self):
        """Ensure the run directory exists"""
        self.root.mkdir(parents=True, exist_ok=True)

    def path(self, name: str) -> Path:
        return self.root / name

    def load_json(self, name: str) -> Dict[str, Any]:
        """
        Read a JSON document from the run directory

        Returns:
            dict: Parsed document, or {} when the file does not exist
        """
        target = self.path(name)
        if target.exists():
            with open(target, "r", encoding="utf-8") as f:
                return json.load(f)
        return {}

    def save_json(self, name: str, data: Any) -> Path:
        """
        Save a JSON document atomically (sorted keys, 2-space indent)

        Returns:
            Path: Written file
        """
        target = atomic_write_text(self.path(name), json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n")
        logger.debug(f"Saved {target}")
        return target

    def save_dataset(self, dataset: Dataset, name: str = "dataset.json") -> Path:
        return save_dataset(dataset, self.path(name))

    def save_model(self, model: Model, name: str = "model.json") -> Path:
        return save_model(model, self.path(name))
