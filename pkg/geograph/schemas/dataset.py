from pydantic import BaseModel, Field, model_validator


class ConstructiveCreate(BaseModel):
    n_clusters: int = Field(10, ge=1, le=100)
    features_per_cluster: int = Field(50, ge=1, le=1000)
    p_in: float = Field(0.07, ge=0, le=1)
    p_out: float = Field(0.007, ge=0, le=1)
    samples_per_cluster: int = Field(100, ge=1, le=1000)
    seed: int = Field(0, ge=0)

    @model_validator(mode="after")
    def validate_probabilities(self):
        """Ensure clusters are at least as dense inside their own block."""
        if self.p_out > self.p_in:
            raise ValueError("p_out must not exceed p_in")
        return self


class DatasetSummary(BaseModel):
    name: str
    n_samples: int
    n_features: int
    n_classes: int
    train: int
    validation: int
    test: int
    zero_rows: list[int] = Field(default_factory=list)
    class_counts: list[int]
