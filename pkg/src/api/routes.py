from typing import Optional

from fastapi import APIRouter, HTTPException, Query

from src.core.weights import WeightPMF, binomial_pmf, slice_pmf, tail_mass
from src.krawtchouk.bias import bias_profile
from src.lp.constructions import MAX_TAIL, OBJECTIVES, extremal_tail, residue_filter
from src.models.schemas import (
    BiasProfileRecord,
    LPSolutionRecord,
    PipelineRecord,
    PipelineRequest,
    WeightPMFRecord,
)
from src.noise.kernels import smooth
from src.transform.pipeline import pipeline_report
from src.utils.errors import LabError
from src.utils.logger import get_logger
from src.utils.rationals import format_rational, to_fraction

logger = get_logger(__name__)
router = APIRouter()


def _source(n: int, slice_weight: Optional[int]) -> WeightPMF:
    return binomial_pmf(n) if slice_weight is None else slice_pmf(n, slice_weight)


def _bad_request(operation: str, e: LabError) -> HTTPException:
    logger.error(f"❌ {operation} rejected: {e}")
    return HTTPException(status_code=400, detail=f"{operation} failed: {str(e)}")


@router.get("/tail")
async def get_tail(
    n: int = Query(..., ge=1, description="Dimension"),
    t: int = Query(..., description="Threshold"),
    slice_weight: Optional[int] = Query(None, alias="slice", description="Slice weight (binomial law if omitted)")
):
    """
    Exact upper tail Pr[W >= t]

    - **n**: Dimension
    - **t**: Threshold (any integer)
    - **slice**: Use the uniform law on this weight slice instead of the binomial
    """
    try:
        value = tail_mass(_source(n, slice_weight), t)
        return {"n": n, "t": t, "tail": format_rational(value)}
    except LabError as e:
        raise _bad_request("tail", e)


@router.get("/bias", response_model=BiasProfileRecord)
async def get_bias(
    n: int = Query(..., ge=1, description="Dimension"),
    slice_weight: Optional[int] = Query(None, alias="slice", description="Slice weight (binomial law if omitted)")
):
    """Exact parity bias for every parity size 0..n"""
    try:
        return BiasProfileRecord.from_domain(bias_profile(_source(n, slice_weight)))
    except LabError as e:
        raise _bad_request("bias", e)


@router.get("/extremal", response_model=LPSolutionRecord)
async def get_extremal(
    n: int = Query(..., ge=1, description="Dimension"),
    k: int = Query(..., ge=0, description="Number of matched moments"),
    t: int = Query(..., description="Threshold or point"),
    objective: str = Query(MAX_TAIL, description=f"One of {', '.join(OBJECTIVES)}"),
    mod: Optional[int] = Query(None, ge=1, description="Restrict to weights congruent to residue mod M"),
    residue: int = Query(0, description="Residue for mod")
):
    """
    Extremal value over all k-uniform weight laws

    Infeasible programs return 200 with status "infeasible".
    """
    try:
        support_filter = residue_filter(mod, residue) if mod else None
        solution = extremal_tail(n, k, t, objective, support_filter)
        logger.info(f"Extremal n={n} k={k} t={t} {objective}: {solution.status}")
        return LPSolutionRecord.from_domain(solution)
    except LabError as e:
        raise _bad_request("extremal", e)


@router.get("/smooth", response_model=WeightPMFRecord)
async def get_smooth(
    n: int = Query(..., ge=1, description="Dimension"),
    rho: str = Query(..., description="Correlation as 'p/q' in [0, 1]"),
    slice_weight: Optional[int] = Query(None, alias="slice", description="Slice weight (binomial law if omitted)")
):
    """Weight law after N_rho smoothing"""
    try:
        return WeightPMFRecord.from_domain(smooth(_source(n, slice_weight), to_fraction(rho)))
    except LabError as e:
        raise _bad_request("smooth", e)


@router.post("/pipeline", response_model=PipelineRecord)
async def post_pipeline(request: PipelineRequest, rows: bool = Query(False, description="Include per-size rows")):
    """
    Run sparsify + re-randomization on a k-uniform law and certify the result

    Returns the output law with its support, interval and bias checks.
    """
    try:
        report = pipeline_report(request.pmf.to_domain(), request.k)
        return PipelineRecord.from_domain(report, with_rows=rows)
    except LabError as e:
        raise _bad_request("pipeline", e)
