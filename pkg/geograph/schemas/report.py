"""Experiment report schema (report.json)."""

from pydantic import BaseModel, ConfigDict, Field

REPORT_VERSION = 1


class SweepRecord(BaseModel):
    """One grid point of a sweep, or one baseline, aggregated over seeded runs."""

    model_config = ConfigDict(extra="forbid")

    method: str = Field(..., description="Construction (knn, mknn, cknn, rmst, sparsified) or baseline (mlp, knnc, complete)")
    param: int | float | None = Field(None, description="k, gamma or sigma; k for kNNC; None for the MLP")
    edge_density: float = Field(0.0, ge=0, le=1)
    mean_degree: float = Field(0.0, ge=0)
    edge_count: int = Field(0, ge=0)
    val_acc_mean: float = Field(..., ge=0, le=1)
    val_acc_std: float = Field(0.0, ge=0)
    test_acc_mean: float = Field(..., ge=0, le=1)
    test_acc_std: float = Field(0.0, ge=0)
    alignment: float | None = Field(None, ge=0, le=1, description="Alignment at the method's selected p*")
    alignments: dict[str, float] = Field(default_factory=dict, description="Alignment per p* ratio")
    rcs_mean: float | None = None
    rcs_std: float | None = Field(None, ge=0)
    runs: int = Field(10, ge=0)
    failed_runs: int = Field(0, ge=0)
    connected: bool = True
    q: int | None = Field(None, description="Sparsifier sample count")


class MethodResult(BaseModel):
    model_config = ConfigDict(extra="forbid")

    method: str
    records: list[SweepRecord]
    optimum: SweepRecord | None = None
    p_star: float | None = None
    alignment_correlation: float | None = None
    rcs_correlation: float | None = None


class SparsificationResult(BaseModel):
    """A σ sweep started from one densification optimum."""

    model_config = ConfigDict(extra="forbid")

    rank: int = Field(1, ge=1, description="Position of the source graph among the best densification records")
    source: SweepRecord
    records: list[SweepRecord]
    selected: SweepRecord
    sparsified: bool = Field(..., description="False when the unsparsified graph is reported (σ = 0)")
    p_star: float | None = None
    alignment_correlation: float | None = None
    rcs_correlation: float | None = None


class ExperimentReport(BaseModel):
    model_config = ConfigDict(extra="forbid")

    version: int = REPORT_VERSION
    created_at: str = Field(..., description="UTC ISO-8601 timestamp; the only non-deterministic field")
    dataset: str
    n_samples: int
    n_features: int
    n_classes: int
    seeds: list[int]
    oversample_c: float
    baselines: list[SweepRecord] = Field(default_factory=list)
    methods: list[MethodResult] = Field(default_factory=list)
    sparsification: list[SparsificationResult] = Field(default_factory=list)
    config: dict = Field(default_factory=dict, description="Echo of the experiment configuration")


def ratio_key(p: float) -> str:
    return f"{p:g}"
