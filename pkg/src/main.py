from contextlib import asynccontextmanager

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from datetime import datetime
import mpmath

from src.api.routes import router
from src.config import get_settings
from src.models.schemas import HealthResponse
from src.utils.logger import get_logger

logger = get_logger(__name__)

VERSION = "1.0.0"


@asynccontextmanager
async def lifespan(app: FastAPI):
    """Log the numeric setup on startup and a line on shutdown"""
    settings = get_settings()
    logger.info("=" * 70)
    logger.info("🚀 Weight Lab Starting...")
    logger.info(f"📦 Version: {VERSION}")
    logger.info(f"🔢 mpmath precision: {mpmath.mp.dps} digits, pivot guard: {settings.max_pivots}")
    logger.info("=" * 70)
    yield
    logger.info("🛑 Weight Lab Shutting Down...")


app = FastAPI(
    title="Weight Lab",
    description="Exact k-uniform and small-bias weight laws: extremal tails with LP certificates, noise kernels, bias certification.",
    version=VERSION,
    docs_url="/docs",
    redoc_url="/redoc",
    lifespan=lifespan,
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

app.include_router(router, prefix="/api/v1", tags=["lab"])


@app.get("/health", response_model=HealthResponse)
@app.head("/health")
def health_check():
    """Liveness plus the numeric precision in effect"""
    return HealthResponse(
        status="healthy",
        message="Weight lab is running",
        version=VERSION,
        timestamp=datetime.now().isoformat(),
        precision=mpmath.mp.dps,
    )


if __name__ == "__main__":
    import uvicorn
    uvicorn.run(app, host="0.0.0.0", port=8000)
