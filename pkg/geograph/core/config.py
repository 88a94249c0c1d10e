from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    log_level: str = Field(default="INFO", alias="GEOGRAPH_LOG_LEVEL")

    # Process-pool size for sweeps (1 runs everything in-process)
    workers: int = Field(default=1, ge=1, alias="GEOGRAPH_WORKERS")

    # Artifacts
    output_dir: str = Field(default="results", alias="GEOGRAPH_OUTPUT_DIR")

    # Root of the published datasets, used by the acceptance tests
    data_dir: str | None = Field(default=None, alias="GEOGRAPH_DATA_DIR")

    # Sparsifier sample-count constant
    oversample_c: float = Field(default=0.25, gt=0, alias="GEOGRAPH_OVERSAMPLE_C")

    # HTTP API
    api_max_nodes: int = Field(default=2000, ge=2, alias="GEOGRAPH_API_MAX_NODES")
    host: str = Field(default="127.0.0.1", alias="GEOGRAPH_HOST")
    port: int = Field(default=8000, alias="GEOGRAPH_PORT")

    @field_validator("data_dir", mode="before")
    @classmethod
    def empty_str_to_none(cls, v: str | None) -> str | None:
        """Convert empty strings to None for optional string fields and strip whitespace."""
        if v is None:
            return None
        if isinstance(v, str):
            v = v.strip()
            if v == "":
                return None
        return v

    @field_validator("log_level")
    @classmethod
    def normalize_log_level(cls, v: str) -> str:
        v = v.strip().upper()
        if v not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"Unknown log level: {v}")
        return v

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )


settings = Settings()
