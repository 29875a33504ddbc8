from fractions import Fraction
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from src.core.weights import WeightPMF
from src.lp.polynomial import UnivariatePoly
from src.lp.simplex import LPSolution
from src.utils.rationals import format_rational


def _parse_rational(v) -> Fraction:
    try:
        return Fraction(str(v).strip())
    except (ValueError, ZeroDivisionError):
        raise ValueError(f'Not a rational number: {v!r}')


def _render(v) -> str:
    """Exact values as 'num/den', reals as decimal strings"""
    if isinstance(v, (int, Fraction)) and not isinstance(v, bool):
        return format_rational(v)
    return str(v)


class MassEntry(BaseModel):
    """One (weight, mass) pair"""
    w: int = Field(..., description="Centered Hamming weight")
    p: str = Field(..., description="Exact probability as 'num/den'")

    @field_validator('p')
    @classmethod
    def mass_must_be_rational(cls, v):
        value = _parse_rational(v)
        if value < 0:
            raise ValueError('Mass must be nonnegative')
        return format_rational(value)


class WeightPMFRecord(BaseModel):
    """Serialized weight law of an exchangeable distribution"""
    n: int = Field(..., ge=1, description="Dimension")
    pmf: List[MassEntry] = Field(..., description="Masses sorted by weight")

    class Config:
        json_schema_extra = {
            "example": {
                "n": 2,
                "pmf": [{"w": -2, "p": "1/4"}, {"w": 0, "p": "1/2"}, {"w": 2, "p": "1/4"}]
            }
        }

    @classmethod
    def from_domain(cls, pmf: WeightPMF) -> "WeightPMFRecord":
        return cls(n=pmf.n, pmf=[MassEntry(w=w, p=format_rational(p)) for w, p in pmf.items])

    def to_domain(self) -> WeightPMF:
        return WeightPMF.from_masses(self.n, {e.w: Fraction(e.p) for e in self.pmf})


class BiasProfileRecord(BaseModel):
    """Parity bias for every parity size 0..n"""
    n: int = Field(..., ge=1, description="Dimension")
    bias: List[str] = Field(..., description="bias[ell] as 'num/den'")

    @classmethod
    def from_domain(cls, profile) -> "BiasProfileRecord":
        return cls(n=profile.n, bias=[format_rational(b) for b in profile.biases])


class PolyRecord(BaseModel):
    """Polynomial coefficients, constant term first"""
    coeffs: List[str] = Field(default_factory=list, description="Coefficients as 'num/den'")

    @classmethod
    def from_domain(cls, poly: UnivariatePoly) -> "PolyRecord":
        return cls(coeffs=[_render(c) for c in poly.coeffs])

    def to_domain(self) -> UnivariatePoly:
        return UnivariatePoly(tuple(_parse_rational(c) for c in self.coeffs))


class LPSolutionRecord(BaseModel):
    """Serialized exact LP outcome"""
    status: str = Field(..., description="optimal, infeasible or unbounded")
    value: Optional[str] = Field(None, description="Optimal value as 'num/den'")
    primal: Optional[WeightPMFRecord] = Field(None, description="Optimal vertex as a weight law")
    dual: Optional[PolyRecord] = Field(None, description="Sandwiching polynomial, power basis")

    class Config:
        json_schema_extra = {
            "example": {
                "status": "optimal",
                "value": "1/6",
                "primal": {"n": 4, "pmf": [{"w": -2, "p": "1/3"}, {"w": 0, "p": "1/2"}, {"w": 4, "p": "1/6"}]},
                "dual": {"coeffs": ["0/1", "1/12", "1/24"]}
            }
        }

    @classmethod
    def from_domain(cls, solution: LPSolution) -> "LPSolutionRecord":
        return cls(
            status=solution.status,
            value=None if solution.value is None else format_rational(solution.value),
            primal=None if solution.primal is None else WeightPMFRecord.from_domain(solution.primal),
            dual=None if solution.dual is None else PolyRecord.from_domain(solution.dual),
        )

    def to_domain(self) -> LPSolution:
        return LPSolution(
            status=self.status,
            value=None if self.value is None else Fraction(self.value),
            primal=None if self.primal is None else self.primal.to_domain(),
            dual=None if self.dual is None else self.dual.to_domain(),
        )


class CertificationRowRecord(BaseModel):
    ell: int
    case: str
    bias: str
    bound: str
    passed: bool

    @classmethod
    def from_domain(cls, row) -> "CertificationRowRecord":
        return cls(ell=row.ell, case=row.case, bias=format_rational(row.bias), bound=_render(row.bound), passed=row.passed)


class PipelineRecord(BaseModel):
    """Pipeline output with its checks"""
    k: int
    result: WeightPMFRecord
    certified: bool
    interval_ok: bool = Field(..., description="Interval property against the sparsified law")
    support_ok: bool
    source_interval_ok: bool = Field(..., description="Interval property against the input law (informational)")
    rows: List[CertificationRowRecord] = Field(default_factory=list)

    @classmethod
    def from_domain(cls, report, with_rows: bool = True) -> "PipelineRecord":
        return cls(
            k=report.k,
            result=WeightPMFRecord.from_domain(report.result),
            certified=report.certification.passed,
            interval_ok=report.interval_ok,
            support_ok=report.support_ok,
            source_interval_ok=report.source_interval_ok,
            rows=[CertificationRowRecord.from_domain(r) for r in report.certification.rows] if with_rows else [],
        )


class PipelineRequest(BaseModel):
    """Body of POST /api/v1/pipeline"""
    k: int = Field(..., ge=2, description="Uniformity of the input law")
    pmf: WeightPMFRecord


class ParamSet(BaseModel):
    """Scalar parameters shared by scenarios and checkers; rationals as strings"""
    n: Optional[int] = Field(None, ge=1, description="Dimension")
    k: Optional[int] = Field(None, ge=1, description="Uniformity / moment order")
    k_prime: Optional[int] = Field(None, ge=1, description="Uniformity of the comparison family")
    t: Optional[int] = Field(None, description="Threshold weight")
    a: Optional[int] = Field(None, description="Interval start")
    b: Optional[int] = Field(None, description="Interval end")
    m: Optional[int] = Field(None, ge=1, description="Residue modulus")
    rho: Optional[str] = Field(None, description="Noise correlation in [0, 1]")
    eps: Optional[str] = Field(None, description="Bias bound")
    delta: Optional[str] = Field(None, description="Extremal tail value")
    theta: Optional[str] = Field(None, description="Normalized threshold")
    sigma2: Optional[str] = Field(None, description="Mixture variance in (0, 1]")
    alpha: Optional[str] = Field(None, description="Exponent coefficient")
    q: Optional[str] = Field(None, description="Vandermonde base > 1")
    d_half: Optional[str] = Field(None, description="Interval half-width coefficient")
    scale: Optional[str] = Field(None, description="Erdelyi scale L")
    beta: Optional[str] = Field(None, description="Threshold multiplier")
    lift: Optional[str] = Field(None, description="Placement multiplier for the anticoncentrated atom")
    c: Optional[str] = Field(None, description="Caller-supplied universal constant")
    weights: Optional[List[int]] = Field(None, description="Slice weights of a mixture")

    class Config:
        json_schema_extra = {
            "example": {"n": 64, "k": 2, "rho": "1/2", "beta": "1/1", "c": "1/1"}
        }

    @field_validator('eps', 'delta', 'theta', 'alpha', 'd_half', 'scale', 'beta', 'lift', 'c')
    @classmethod
    def must_be_rational(cls, v):
        if v is None:
            return v
        return format_rational(_parse_rational(v))

    @field_validator('rho')
    @classmethod
    def rho_in_unit_interval(cls, v):
        if v is None:
            return v
        value = _parse_rational(v)
        if not 0 <= value <= 1:
            raise ValueError('rho must lie in [0, 1]')
        return format_rational(value)

    @field_validator('sigma2')
    @classmethod
    def sigma2_in_range(cls, v):
        if v is None:
            return v
        value = _parse_rational(v)
        if not 0 < value <= 1:
            raise ValueError('sigma2 must lie in (0, 1]')
        return format_rational(value)

    @field_validator('q')
    @classmethod
    def q_above_one(cls, v):
        if v is None:
            return v
        value = _parse_rational(v)
        if value <= 1:
            raise ValueError('q must exceed 1')
        return format_rational(value)

    @model_validator(mode='after')
    def k_at_most_n(self):
        if self.n is not None and self.k is not None and self.k > self.n:
            raise ValueError('k must not exceed n')
        return self

    def rational(self, name: str) -> Optional[Fraction]:
        value = getattr(self, name)
        return None if value is None else Fraction(value)

    def merged(self, defaults: Dict[str, Any]) -> "ParamSet":
        """Fill unset fields from defaults"""
        data = {key: value for key, value in defaults.items()}
        data.update(self.model_dump(exclude_none=True))
        return ParamSet(**data)


class SeparationReportRecord(BaseModel):
    """Serialized outcome of a separation scenario"""
    scenario: str
    params: ParamSet
    threshold: Optional[int] = None
    interval: Optional[List[int]] = None
    lhs: str
    rhs: str
    advantage: str
    template: str
    extras: Dict[str, Any] = Field(default_factory=dict)


class CheckReport(BaseModel):
    """Outcome of one verification check"""
    name: str = Field(..., description="Check identifier")
    passed: bool = Field(..., description="Whether the check passed")
    details: Dict[str, Any] = Field(default_factory=dict, description="Check-specific values")

    class Config:
        json_schema_extra = {
            "example": {"name": "core.binomial_moments", "passed": True, "details": {"n": 4}}
        }


class HealthResponse(BaseModel):
    """Response model for health check endpoint"""
    status: str = Field(..., description="Service status")
    message: str = Field(..., description="Status message")
    version: str = Field(..., description="Application version")
    timestamp: str = Field(..., description="Check timestamp")
    precision: int = Field(..., description="mpmath working precision (decimal digits)")
