"""
Tests for ArchiveManager, dataset/model persistence and run manifests
"""

import json
import os
import tempfile
from unittest.mock import patch

import numpy as np
import pytest

from seqrec.features import feature_dimension, fit_normalizer, model_from_weights
from seqrec.models import Variant
from seqrec.services import (
    MANIFEST_NAME,
    ArchiveManager,
    RunManifest,
    atomic_write_text,
    load_dataset,
    load_model,
    save_dataset,
    save_model,
    sha256_file,
    write_manifest,
)


@pytest.fixture
def archive(tmp_path):
    """创建 ArchiveManager 实例"""
    return ArchiveManager(tmp_path / "run")


class TestArchiveManager:
    """ArchiveManager 测试类"""

    def test_init_creates_dir(self):
        """测试运行目录创建"""
        with tempfile.TemporaryDirectory() as tmpdir:
            root = os.path.join(tmpdir, "nested", "dir")
            ArchiveManager(root)
            assert os.path.isdir(root)

    def test_load_json_missing(self, archive):
        """测试加载不存在的文件"""
        assert archive.load_json("absent.json") == {}

    def test_save_and_load_json(self, archive):
        """测试保存并读回"""
        data = {"b": 1, "a": [1, 2]}
        path = archive.save_json("stats.json", data)
        assert archive.load_json("stats.json") == data
        # sorted keys
        assert list(json.loads(path.read_text())) == ["a", "b"]

    def test_atomic_write_leaves_no_temp(self, tmp_path):
        """测试原子写不留临时文件"""
        target = atomic_write_text(tmp_path / "out.txt", "hello\n")
        assert target.read_text() == "hello\n"
        assert [p.name for p in tmp_path.iterdir()] == ["out.txt"]

    def test_atomic_write_failure_keeps_old(self, tmp_path):
        """测试写入失败时保留原文件"""
        target = tmp_path / "out.txt"
        target.write_text("old")
        with patch("seqrec.services.archive.os.replace", side_effect=OSError("disk full")):
            with pytest.raises(OSError):
                atomic_write_text(target, "new")
        assert target.read_text() == "old"
        assert [p.name for p in tmp_path.iterdir()] == ["out.txt"]

    def test_sha256(self, tmp_path):
        """测试文件哈希"""
        path = tmp_path / "x.txt"
        path.write_bytes(b"abc")
        assert sha256_file(path) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"


class TestPersistence:
    """数据集与模型持久化测试类"""

    def test_dataset_round_trip(self, tmp_path, toy_dataset):
        """测试数据集往返"""
        path = save_dataset(toy_dataset, tmp_path / "dataset.json")
        assert load_dataset(path) == toy_dataset

    def test_dataset_bytes_stable(self, tmp_path, toy_dataset):
        """测试两次写出字节相同"""
        a = save_dataset(toy_dataset, tmp_path / "a.json").read_bytes()
        b = save_dataset(load_dataset(tmp_path / "a.json"), tmp_path / "b.json").read_bytes()
        assert a == b

    def test_model_round_trip(self, archive, toy_dataset, rng):
        """测试模型往返"""
        meta = fit_normalizer(toy_dataset)
        model = model_from_weights(rng.normal(size=feature_dimension(meta)), meta, Variant.SR, 2.0)
        path = archive.save_model(model)
        assert path.name == "model.json"
        restored = load_model(path)
        assert restored == model
        np.testing.assert_array_equal(restored.unary_weights, model.unary_weights)

    def test_model_helpers(self, tmp_path, toy_dataset):
        """测试模块级保存函数"""
        meta = fit_normalizer(toy_dataset)
        model = model_from_weights(np.zeros(feature_dimension(meta)), meta, Variant.SP, 1.0)
        assert load_model(save_model(model, tmp_path / "m.json")).variant is Variant.SP


class TestManifest:
    """RunManifest 测试类"""

    def test_write_manifest(self, archive, tmp_path):
        """测试清单内容"""
        source = tmp_path / "input.csv"
        source.write_text("poi_id\n1\n")
        manifest = RunManifest(command="ingest", seed=3, config={"n_bins": 5})
        manifest.add_input(source)
        manifest.add_output(archive.path("dataset.json"), archive.root)
        manifest.add_output(archive.path("dataset.json"), archive.root)

        path = write_manifest(manifest, archive)
        assert path.name == MANIFEST_NAME
        data = archive.load_json(MANIFEST_NAME)
        assert data["command"] == "ingest"
        assert data["seed"] == 3
        assert data["outputs"] == ["dataset.json"]
        assert data["inputs"][str(source)] == sha256_file(source)
