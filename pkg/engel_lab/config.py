from pydantic_settings import BaseSettings, SettingsConfigDict

class Settings(BaseSettings):
    JOBS: int = 1
    MAX_MATRIX_DIM: int = 4096
    MAX_M: int = 6
    MAX_R: int = 3
    MAX_GROUND: int = 64
    DEFAULT_SEED: int = 42
    DEFAULT_SAMPLES: int = 200
    DEFAULT_GROUND: int = 4
    STAR_EXHAUSTIVE_CAP: int = 30
    LUCAS_ORACLE_MAX: int = 2048
    PASCAL_ORACLE_CAP: int = 4096
    RANDOM_SUPPORT_MAX: int = 8
    COLLECTION_STEP_LIMIT: int = 2_000_000
    LOG_LEVEL: str = "WARNING"

    model_config = SettingsConfigDict(env_prefix="ENGEL_LAB_", env_file=".env")

settings = Settings()
