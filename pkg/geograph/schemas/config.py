"""Experiment configuration file (TOML) schema."""

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from geograph.core.config import settings
from geograph.domain.graph import SWEEPABLE, GraphMethod
from geograph.domain.model import TrainConfig
from geograph.errors import ConfigError
from geograph.schemas.dataset import ConstructiveCreate


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ConstructiveSection(ConstructiveCreate):
    model_config = ConfigDict(extra="forbid")


class DatasetSection(_Section):
    name: str | None = None
    features: str | None = None
    labels: str | None = None
    split: str | None = None
    header: bool = False
    n_classes: int | None = Field(None, ge=1)
    split_seed: int = Field(0, ge=0)
    constructive: ConstructiveSection | None = None

    @model_validator(mode="after")
    def validate_source(self):
        """Exactly one source: files (features + labels) or the constructive generator."""
        has_files = self.features is not None or self.labels is not None
        if self.constructive is not None and has_files:
            raise ValueError("Give either features/labels files or [dataset.constructive], not both")
        if self.constructive is None and (self.features is None or self.labels is None):
            raise ValueError("Both features and labels are required without [dataset.constructive]")
        return self

    def resolve_paths(self, base: Path) -> "DatasetSection":
        def resolve(p: str | None) -> str | None:
            if p is None:
                return None
            path = Path(p)
            return str(path if path.is_absolute() else base / path)

        return self.model_copy(
            update={
                "features": resolve(self.features),
                "labels": resolve(self.labels),
                "split": resolve(self.split),
            }
        )


class MethodsSection(_Section):
    names: list[GraphMethod] = Field(default_factory=lambda: [GraphMethod.CKNN])
    delta: float = Field(1.0, gt=0, description="CkNN scale δ")
    k_local: int = Field(1, ge=1, description="RMST local-density neighbor k")

    @field_validator("names")
    @classmethod
    def validate_names(cls, v: list[GraphMethod]) -> list[GraphMethod]:
        bad = [m.value for m in v if m not in SWEEPABLE]
        if bad:
            raise ValueError(f"Not a sweepable construction: {bad}")
        if len(set(v)) != len(v):
            raise ValueError("Duplicate method names")
        return v


class GcnSection(_Section):
    epochs: int = Field(2000, ge=1)
    learning_rate: float = Field(0.01, gt=0)
    dropout: float = Field(0.5, ge=0, lt=1)
    l2: float = Field(5e-4, ge=0)
    early_stop_window: int = Field(200, ge=1)
    hidden: int = Field(16, ge=1)
    reduction: Literal["sum", "mean"] = "sum"

    def train_config(self, seed: int) -> TrainConfig:
        return TrainConfig(seed=seed, **self.model_dump())


class SweepSection(_Section):
    grid_size: int = Field(50, ge=2, le=50)
    p_star_grid: list[float] = Field(
        default_factory=lambda: [round(0.1 * i, 1) for i in range(1, 11)]
    )
    diagnostics: bool = True
    perplexity: float = Field(30.0, gt=0)
    tsne_iterations: int = Field(1000, ge=1)

    @field_validator("p_star_grid")
    @classmethod
    def validate_ratios(cls, v: list[float]) -> list[float]:
        if not v:
            raise ValueError("p_star_grid must not be empty")
        if any(not 0 < p <= 1 for p in v):
            raise ValueError("p_star_grid values must lie in (0, 1]")
        return sorted(set(v))


class SparsifySection(_Section):
    enabled: bool = True
    method: GraphMethod = GraphMethod.CKNN
    grid_size: int = Field(50, ge=2)
    oversample_c: float = Field(default_factory=lambda: settings.oversample_c, gt=0)
    seed: int = Field(0, ge=0)
    top_n: int = Field(1, ge=1)


class BaselinesSection(_Section):
    mlp: bool = True
    knnc: bool = True
    knnc_ks: list[int] = Field(default_factory=lambda: [1, 2, 4, 8, 16, 32, 64])
    complete_graph: bool = False


class SeedsSection(_Section):
    values: list[int] = Field(default_factory=lambda: list(range(10)), min_length=1)

    @field_validator("values")
    @classmethod
    def validate_seeds(cls, v: list[int]) -> list[int]:
        if any(s < 0 for s in v):
            raise ValueError("Seeds must be non-negative")
        return v


class OutputSection(_Section):
    dir: str | None = None


class ExperimentConfig(_Section):
    dataset: DatasetSection
    methods: MethodsSection = Field(default_factory=MethodsSection)
    gcn: GcnSection = Field(default_factory=GcnSection)
    sweep: SweepSection = Field(default_factory=SweepSection)
    sparsify: SparsifySection = Field(default_factory=SparsifySection)
    baselines: BaselinesSection = Field(default_factory=BaselinesSection)
    seeds: SeedsSection = Field(default_factory=SeedsSection)
    output: OutputSection = Field(default_factory=OutputSection)

    @classmethod
    def from_mapping(cls, data: dict, base_dir: Path | None = None) -> "ExperimentConfig":
        try:
            cfg = cls.model_validate(data)
        except ValidationError as e:
            raise ConfigError(f"Invalid experiment configuration: {e}") from e
        if base_dir is not None:
            cfg = cfg.model_copy(update={"dataset": cfg.dataset.resolve_paths(base_dir)})
        return cfg

    @classmethod
    def from_toml(cls, path: str | Path) -> "ExperimentConfig":
        """
        Load and validate a TOML experiment file.

        Relative dataset paths are resolved against the file's directory.

        Raises:
            ConfigError: If the file is missing, is not TOML, or fails validation
        """
        path = Path(path)
        try:
            with path.open("rb") as fh:
                data = tomllib.load(fh)
        except OSError as e:
            raise ConfigError(f"Cannot read config {path}: {e}") from e
        except tomllib.TOMLDecodeError as e:
            raise ConfigError(f"{path}: invalid TOML: {e}") from e
        return cls.from_mapping(data, base_dir=path.parent)
