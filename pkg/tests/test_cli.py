"""
Tests for the command-line surface and exit codes
"""

import hashlib
import json

import pandas as pd
import pytest
from loguru import logger

from seqrec.main import build_parser, cli
from seqrec.models import Query
from seqrec.services import load_dataset, load_model
from seqrec.workflow import resolve_start

from .helpers import read_lp


def _run(argv):
    with pytest.raises(SystemExit) as exc:
        cli(argv)
    return exc.value.code


@pytest.fixture
def ingested(tmp_path, csv_corpus):
    """ingest 后的运行目录"""
    traj_file, poi_file = csv_corpus
    out = tmp_path / "ingest"
    assert _run(["ingest", "--traj", str(traj_file), "--pois", str(poi_file), "--out", str(out)]) == 0
    return out


@pytest.fixture
def trained(tmp_path, ingested):
    """训练好的 SRpath 模型目录"""
    out = tmp_path / "train"
    code = _run(["train", "--dataset", str(ingested / "dataset.json"), "--variant", "srpath",
                 "--c", "1", "--out", str(out)])
    assert code == 0
    return out


class TestParser:
    """build_parser 测试类"""

    def test_train_c_and_tune_exclusive(self):
        """测试 --c 与 --tune 互斥"""
        with pytest.raises(SystemExit):
            build_parser().parse_args(["train", "--dataset", "d.json", "--c", "1", "--tune"])

    def test_defaults(self):
        """测试默认值"""
        args = build_parser().parse_args(["evaluate", "--dataset", "d.json"])
        assert args.methods == ["random", "popularity"]
        assert args.k is None


class TestCommands:
    """各子命令测试类"""

    def test_ingest(self, ingested):
        """测试 ingest 输出和归档"""
        dataset = load_dataset(ingested / "dataset.json")
        assert dataset.n_queries == 3
        stats = json.loads((ingested / "stats.json").read_text())
        assert stats["n_trajectories"] == 4
        manifest = json.loads((ingested / "manifest.json").read_text())
        assert manifest["command"] == "ingest"
        assert sorted(manifest["outputs"]) == ["dataset.json", "stats.json"]

    def test_run_log(self, ingested):
        """测试运行目录写出 run.log"""
        logger.complete()
        text = (ingested / "run.log").read_text(encoding="utf-8")
        assert "Step 3 complete" in text

    def test_ingest_prints_summary(self, tmp_path, csv_corpus, capsys):
        """测试汇总行"""
        traj_file, poi_file = csv_corpus
        _run(["ingest", "--traj", str(traj_file), "--pois", str(poi_file), "--out", str(tmp_path / "x")])
        assert "traj=4 pois=4 queries=3" in capsys.readouterr().out

    def test_corrupt_row_exit_2(self, tmp_path, csv_corpus):
        """测试坏行退出码 2"""
        _, poi_file = csv_corpus
        bad = tmp_path / "bad.csv"
        bad.write_text("user_id,traj_id,seq_index,poi_id\nu1,t1,zero,10\n")
        assert _run(["ingest", "--traj", str(bad), "--pois", str(poi_file), "--out", str(tmp_path / "o")]) == 2

    def test_unknown_poi_exit_2(self, tmp_path, csv_corpus):
        """测试未知 POI 退出码 2"""
        _, poi_file = csv_corpus
        bad = tmp_path / "bad.csv"
        bad.write_text("user_id,traj_id,seq_index,poi_id\nu1,t1,0,77\n")
        assert _run(["ingest", "--traj", str(bad), "--pois", str(poi_file), "--out", str(tmp_path / "o")]) == 2

    def test_train(self, trained):
        """测试训练输出"""
        model = load_model(trained / "model.json")
        assert model.variant.value == "SRpath"
        assert model.reg_c == 1.0
        lines = (trained / "diagnostics.jsonl").read_text().splitlines()
        assert lines and all(json.loads(line)["looped_constraints"] == 0 for line in lines)

    def test_train_poirank(self, tmp_path, ingested):
        """测试 POIRANK 训练不写诊断文件"""
        out = tmp_path / "rank"
        assert _run(["train", "--dataset", str(ingested / "dataset.json"), "--variant", "poirank",
                     "--c", "1", "--out", str(out)]) == 0
        assert (out / "model.json").exists()
        assert not (out / "diagnostics.jsonl").exists()

    def test_evaluate(self, tmp_path, ingested):
        """测试评估写出报告"""
        out = tmp_path / "eval"
        code = _run(["evaluate", "--dataset", str(ingested / "dataset.json"), "--methods", "random",
                     "popularity", "--k", "1", "2", "--out", str(out), "--seed", "3"])
        assert code == 0
        frame = pd.read_csv(out / "report.csv")
        # two queries of length >= 2
        assert len(frame) == 2 * 2 * 2
        assert set(frame["method"]) == {"random", "popularity"}

    def test_end_to_end_deterministic(self, tmp_path, csv_corpus):
        """测试 ingest → train SRpath → evaluate 两次运行输出哈希一致"""
        traj_file, poi_file = csv_corpus
        digests = []
        for run in ("a", "b"):
            root = tmp_path / run
            dataset = str(root / "ingest" / "dataset.json")
            assert _run(["ingest", "--traj", str(traj_file), "--pois", str(poi_file),
                         "--out", str(root / "ingest"), "--seed", "5"]) == 0
            assert _run(["train", "--dataset", dataset, "--variant", "srpath", "--c", "1",
                         "--out", str(root / "train"), "--seed", "5"]) == 0
            assert _run(["evaluate", "--dataset", dataset, "--methods", "random", "srpath", "--k", "1", "3",
                         "--c", "1", "--out", str(root / "eval"), "--seed", "5"]) == 0
            digests.append([
                hashlib.sha256((root / name).read_bytes()).hexdigest()
                for name in ("ingest/dataset.json", "train/model.json", "eval/report.csv")
            ])
        assert digests[0] == digests[1]

    def test_export_ilp_rounds(self, tmp_path, ingested, trained):
        """测试每轮一个 LP 文件"""
        out = tmp_path / "lp"
        code = _run(["export-ilp", "--model", str(trained / "model.json"), "--dataset",
                     str(ingested / "dataset.json"), "--start", "10", "--length", "3", "--k", "3",
                     "--out", str(out)])
        assert code == 0
        names = sorted(p.name for p in out.glob("*.lp"))
        assert names == ["query_0_3_round1.lp", "query_0_3_round2.lp", "query_0_3_round3.lp"]
        assert read_lp(out / "query_0_3_round3.lp").constr_by_name("cut_2") is not None
        assert read_lp(out / "query_0_3_round1.lp").constr_by_name("cut_1") is None

    def test_export_ilp_infeasible_exit_4(self, tmp_path, ingested, trained):
        """测试 l > m 退出码 4"""
        code = _run(["export-ilp", "--model", str(trained / "model.json"), "--dataset",
                     str(ingested / "dataset.json"), "--start", "10", "--length", "5",
                     "--out", str(tmp_path / "lp")])
        assert code == 4

    def test_missing_file_exit_1(self, tmp_path):
        """测试其他错误退出码 1"""
        assert _run(["train", "--dataset", str(tmp_path / "none.json"), "--out", str(tmp_path / "o")]) == 1


class TestResolveStart:
    """resolve_start 测试类"""

    def test_source_then_dense(self, ingested):
        """测试先按源 id 再按稠密 id"""
        table = load_dataset(ingested / "dataset.json").pois
        assert resolve_start(table, "12") == 2
        assert resolve_start(table, "3") == 3
        with pytest.raises(ValueError):
            resolve_start(table, "99")
        assert Query(start=resolve_start(table, "10"), length=2).start == 0
