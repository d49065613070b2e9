"""Configuration settings for seqrec"""

from typing import List

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings"""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_prefix="SEQREC_",
        extra="ignore",
    )

    # 运行配置
    threads: int = Field(default=4, ge=1, description="Upper bound on concurrent evaluation folds")
    log_level: str = "INFO"
    output_dir: str = "output"
    seed: int = 0

    # Ingest 配置
    n_clusters: int = Field(default=5, ge=1)
    n_bins: int = Field(default=5, ge=2)

    # 解码配置
    ilp_threshold: int = Field(default=10, ge=1, description="Queries at least this long use the exact path engine")
    max_expansions: int = Field(default=1_000_000, ge=1, description="Heap pops allowed per list Viterbi call")
    exact_path_max_pois: int = Field(default=24, ge=1, description="Largest POI universe the subset DP accepts")

    # 训练配置
    reg_c: float = Field(default=1.0, gt=0)
    max_epochs: int = Field(default=200, ge=1)
    tol: float = Field(default=1e-2, ge=0)

    # 评估配置
    c_grid: List[float] = Field(default_factory=lambda: [1e-2, 1e-1, 1.0, 10.0, 1e2, 1e3])
    mc_train_frac: float = Field(default=0.8, gt=0, lt=1)
    mc_repeats: int = Field(default=5, ge=1)
    top_k_values: List[int] = Field(default_factory=lambda: [1, 3, 5, 10])
    short_traj_threshold: int = Field(default=5, ge=2, description="Queries shorter than this count as short")


settings = Settings()
