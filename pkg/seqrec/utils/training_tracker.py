"""Training diagnostics tracking"""

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Union

from loguru import logger

from ..services.archive import atomic_write_text


@dataclass
class EpochRecord:
    """单个 epoch 的训练统计"""
    epoch: int
    max_violation: float
    objective: float
    seconds: float = 0.0
    looped_constraints: int = 0  # 含重复 POI 的约束序列数
    ground_truth_constraints: int = 0  # 属于 ground truth 的约束序列数

    def to_dict(self) -> Dict:
        """转换为字典"""
        return {
            "epoch": self.epoch,
            "max_violation": self.max_violation,
            "objective": self.objective,
            "seconds": round(self.seconds, 6),
            "looped_constraints": self.looped_constraints,
            "ground_truth_constraints": self.ground_truth_constraints,
        }


class TrainingTracker:
    """追踪整个训练过程的 epoch 统计"""

    def __init__(self, label: str = "train"):
        self.label = label
        self.epochs: List[EpochRecord] = []
        self.converged: bool = False

    def add_epoch(
        self,
        epoch: int,
        max_violation: float,
        objective: float,
        seconds: float = 0.0,
        looped_constraints: int = 0,
        ground_truth_constraints: int = 0,
    ) -> EpochRecord:
        """
        添加一个 epoch 的统计

        Args:
            epoch: Epoch number (1-based)
            max_violation: Largest normalised constraint violation this epoch
            objective: Regularised hinge objective at the epoch's weights
            seconds: Epoch wall time
            looped_constraints: Generated constraints that repeat a POI
            ground_truth_constraints: Generated constraints that are ground truths

        Returns:
            EpochRecord 对象
        """
        record = EpochRecord(
            epoch=epoch,
            max_violation=max_violation,
            objective=objective,
            seconds=seconds,
            looped_constraints=looped_constraints,
            ground_truth_constraints=ground_truth_constraints,
        )
        self.epochs.append(record)
        logger.debug(
            f"[{self.label}] epoch {epoch}: violation={max_violation:.6f} objective={objective:.6f} "
            f"looped={looped_constraints} truths={ground_truth_constraints}"
        )
        return record

    @property
    def final(self) -> Optional[EpochRecord]:
        return self.epochs[-1] if self.epochs else None

    def total_looped(self) -> int:
        return sum(r.looped_constraints for r in self.epochs)

    def total_ground_truth(self) -> int:
        return sum(r.ground_truth_constraints for r in self.epochs)

    def get_summary(self) -> Dict:
        """
        获取汇总信息

        Returns:
            包含 epoch 数、收敛状态和最终违反量的字典
        """
        final = self.final
        return {
            "label": self.label,
            "epochs": len(self.epochs),
            "converged": self.converged,
            "final_max_violation": final.max_violation if final else None,
            "final_objective": final.objective if final else None,
            "looped_constraints": self.total_looped(),
            "ground_truth_constraints": self.total_ground_truth(),
            "seconds": round(sum(r.seconds for r in self.epochs), 6),
        }

    def to_jsonl(self) -> str:
        lines = [json.dumps(record.to_dict(), sort_keys=False) for record in self.epochs]
        return "\n".join(lines) + ("\n" if lines else "")

    def save_jsonl(self, path: Union[str, Path]) -> Path:
        """Write one JSON object per epoch"""
        return atomic_write_text(path, self.to_jsonl())

    def print_summary(self):
        """打印训练摘要"""
        summary = self.get_summary()
        logger.info("=" * 80)
        logger.info(f"📊 Training Summary ({self.label})")
        logger.info("=" * 80)
        logger.info(f"Epochs: {summary['epochs']}  Converged: {summary['converged']}")
        logger.info(f"Final max violation: {summary['final_max_violation']}")
        logger.info(f"Final objective: {summary['final_objective']}")
        logger.info(f"Looped constraints: {summary['looped_constraints']}  "
                    f"Ground-truth constraints: {summary['ground_truth_constraints']}")
        logger.info("=" * 80)
