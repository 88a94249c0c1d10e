from fastapi import APIRouter

from geograph.api.routers import datasets, graphs

api_router = APIRouter()

api_router.include_router(datasets.router)
api_router.include_router(graphs.router)
