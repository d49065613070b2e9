"""Utility modules"""

from .logger import setup_logger
from .training_tracker import EpochRecord, TrainingTracker

__all__ = ["setup_logger", "EpochRecord", "TrainingTracker"]
