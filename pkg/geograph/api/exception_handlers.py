"""Global exception handlers that map geograph exceptions to HTTP responses."""

from fastapi import Request, status
from fastapi.responses import JSONResponse

from geograph.errors import (
    ConnectivityError,
    CorrelationUndefined,
    DegenerateError,
    FormatError,
    GeographError,
    ParamError,
    ShapeError,
    TrainingError,
)
from geograph.schemas.error import ErrorResponse


def _error_response(status_code: int, detail: str, code: str) -> JSONResponse:
    """Return a standardized error response with detail and machine-readable code."""
    body = ErrorResponse(detail=detail, code=code)
    return JSONResponse(status_code=status_code, content=body.model_dump())


def bad_request_handler(_request: Request, exc: GeographError) -> JSONResponse:
    return _error_response(status.HTTP_400_BAD_REQUEST, str(exc), exc.code)


def connectivity_error_handler(_request: Request, exc: ConnectivityError) -> JSONResponse:
    return _error_response(status.HTTP_409_CONFLICT, str(exc), exc.code)


def training_error_handler(_request: Request, exc: TrainingError) -> JSONResponse:
    return _error_response(status.HTTP_500_INTERNAL_SERVER_ERROR, str(exc), exc.code)


def register_exception_handlers(app):
    """Register geograph exception handlers on the FastAPI app."""
    for exc_type in (ParamError, FormatError, ShapeError, DegenerateError, CorrelationUndefined):
        app.add_exception_handler(exc_type, bad_request_handler)
    app.add_exception_handler(ConnectivityError, connectivity_error_handler)
    app.add_exception_handler(TrainingError, training_error_handler)
