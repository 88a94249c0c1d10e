from fastapi import Depends

from geograph.core.config import Settings, settings
from geograph.errors import ParamError


def get_settings() -> Settings:
    return settings


def node_limit(current: Settings = Depends(get_settings)) -> int:
    """Largest node count accepted by the inline graph endpoints."""
    return current.api_max_nodes


def check_node_count(n: int, limit: int) -> None:
    if n > limit:
        raise ParamError(f"{n} nodes exceeds the API limit of {limit}; use the CLI for larger inputs")
