from pydantic import BaseModel, ConfigDict, Field, field_validator

from geograph.domain.graph import GraphMethod


class GraphSidecar(BaseModel):
    """JSON written next to every edge-list TSV."""

    model_config = ConfigDict(extra="allow")

    method: GraphMethod
    parameter: float | None = None
    n: int = Field(..., ge=0)
    edge_count: int = Field(..., ge=0)
    density: float = Field(..., ge=0, le=1)
    mean_degree: float = Field(..., ge=0)
    delta: float | None = None
    k_local: int | None = None
    # sparsified graphs only
    sigma: float | None = None
    q: int | None = None
    support_size: int | None = None
    connected: bool | None = None


class GraphBuild(BaseModel):
    features: list[list[float]] = Field(..., min_length=2, description="Raw N×F features; L1-normalized server-side")
    method: GraphMethod
    param: float | None = Field(None, description="k for knn/mknn/cknn, gamma for rmst")
    delta: float = Field(1.0, gt=0)
    k_local: int = Field(1, ge=1)

    @field_validator("features")
    @classmethod
    def validate_rectangular(cls, v: list[list[float]]) -> list[list[float]]:
        if len({len(row) for row in v}) != 1:
            raise ValueError("All feature rows must have the same length")
        return v


class Graph(BaseModel):
    method: GraphMethod
    parameter: float | None = None
    n: int
    edges: list[tuple[int, int]]
    edge_count: int
    density: float
    mean_degree: float
    connected: bool


class DensityGridResponse(BaseModel):
    method: GraphMethod
    n: int
    values: list[float]


class SparsifyRequest(BaseModel):
    n: int = Field(..., ge=2)
    edges: list[tuple[int, int]] = Field(..., min_length=1)
    sigma: float = Field(..., gt=0, le=1)
    oversample_c: float | None = Field(None, gt=0)
    seed: int = Field(0, ge=0)


class SparsifyResponse(BaseModel):
    graph: Graph
    weights: list[float]
    q: int
    sigma: float
    support_size: int
    connected: bool
