from pathlib import Path

from pydantic_settings import BaseSettings, SettingsConfigDict

from domain.core import constants
from utils.enums import NoiseKind

BASE_DIR = Path(__file__).resolve().parent.parent.parent


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_file=BASE_DIR / ".env",
        env_prefix="BARGAIN_",
        extra="ignore",
    )

    LOG_FILE_PATH: Path = BASE_DIR / "logs" / "bargaining.log"
    LOG_LEVEL: str = "INFO"
    LOG_MAX_BYTES: int = 10 * 1024 * 1024
    LOG_BACKUP_COUNT: int = 5

    DT: float = constants.DEFAULT_DT
    T_FINAL: float = constants.DEFAULT_T_FINAL
    TOL: float = constants.SIMULATOR_TOL
    SAMPLE_STRIDE: int = constants.DEFAULT_SAMPLE_STRIDE
    SEED: int = 0
    NOISE_KIND: NoiseKind = NoiseKind.none
    NOISE_BOUND: float = 0.0
    THRESHOLD: float = constants.DEFAULT_THRESHOLD
    MAX_NORM: float = constants.DEFAULT_MAX_NORM
    PREDICTION_DWELL: int = 0
    MAX_WORKERS: int = 4

    SCENARIO_DIR: Path = BASE_DIR / "scenarios"


settings = Settings()
