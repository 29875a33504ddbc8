"""From bounded-uniformity to small-bias weight laws.

bu_to_sb sparsifies a k-uniform law to at most k+1 weights and then
re-randomizes floor(k/2) coordinates. The result stays k-uniform, moves
every weight by at most k, and has parity biases bounded in three regimes
of the parity size ell:

    ell <= k            exactly 0
    k < ell < n - k     2 (2k/n)^(k/4)
    ell >= n - k        (k/n)^(k/2)
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

import mpmath

from src.core.weights import WeightPMF, admissible_weights, is_k_uniform
from src.krawtchouk.bias import BiasProfile, bias_profile, reflected_order
from src.lp.constructions import fact2_bound, sparsify
from src.noise.kernels import replace_noise
from src.utils.errors import DimensionMismatchError, DomainError, PreconditionError
from src.utils.logger import get_logger
from src.utils.rationals import at_most, exact_power

logger = get_logger(__name__)

LOW = "low"
MIDDLE = "middle"
HIGH = "high"


def noise_rounds(k: int) -> int:
    return k // 2


def bu_to_sb(pmf: WeightPMF, k: int) -> WeightPMF:
    """
    Turn a k-uniform weight law into a small-bias one

    Args:
        pmf: k-uniform weight law
        k: Uniformity, at least 2

    Returns:
        k-uniform law on at most (k+1)(2 floor(k/2) + 1) weights
    """
    return _stages(pmf, k)[1]


def _stages(pmf: WeightPMF, k: int) -> Tuple[WeightPMF, WeightPMF]:
    if k < 2:
        raise DomainError(f"k must be >= 2, got {k}")
    if not is_k_uniform(pmf, k):
        raise PreconditionError(f"input is not {k}-uniform")
    sparse = sparsify(pmf, k)
    result = replace_noise(sparse, noise_rounds(k))
    logger.info(f"✅ Pipeline n={pmf.n} k={k}: {len(pmf)} -> {len(sparse)} -> {len(result)} weights")
    return sparse, result


def case_of(n: int, k: int, ell: int) -> str:
    if ell <= k:
        return LOW
    if ell >= n - k:
        return HIGH
    return MIDDLE


def case_bound(n: int, k: int, ell: int):
    """Printed bound for parity size ell; rational whenever the exponent is integral"""
    case = case_of(n, k, ell)
    if case == LOW:
        return Fraction(0)
    if case == MIDDLE:
        value = exact_power(Fraction(2 * k, n), Fraction(k, 4))
        return 2 * value
    return exact_power(Fraction(k, n), Fraction(k, 2))


def middle_chain_value(n: int, k: int, ell: int) -> mpmath.mpf:
    """Slice bias bound at t = (k n^3)^(1/4) plus the tail beyond t"""
    t = (mpmath.mpf(k) * mpmath.mpf(n) ** 3) ** mpmath.mpf('0.25')
    order = reflected_order(n, ell)
    base = mpmath.mpf(order) / n + t ** 2 / mpmath.mpf(n) ** 2
    slice_part = base ** (mpmath.mpf(order) / 2)
    half = k // 2
    tail_part = fact2_bound(n, half, t) if half >= 1 else mpmath.mpf(1)
    return slice_part + tail_part


@dataclass(frozen=True)
class CertificationRow:
    ell: int
    case: str
    bias: Fraction
    bound: object
    passed: bool
    chain: Optional[mpmath.mpf] = None


@dataclass(frozen=True)
class Certification:
    n: int
    k: int
    rows: Tuple[CertificationRow, ...]
    profile: BiasProfile = field(repr=False)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def failures(self) -> List[CertificationRow]:
        return [r for r in self.rows if not r.passed]


def certify_bias(pmf: WeightPMF, k: int) -> Certification:
    """Compare exact parity biases with the regime bounds for every ell >= 1"""
    n = pmf.n
    if not 1 <= k < n:
        raise DomainError(f"k must lie in [1, n), got {k}")
    profile = bias_profile(pmf)
    rows = []
    for ell in range(1, n + 1):
        bias = profile[ell]
        case = case_of(n, k, ell)
        bound = case_bound(n, k, ell)
        rows.append(CertificationRow(
            ell=ell,
            case=case,
            bias=bias,
            bound=bound,
            passed=at_most(abs(bias), bound),
            chain=middle_chain_value(n, k, ell) if case == MIDDLE else None,
        ))
    certification = Certification(n, k, tuple(rows), profile)
    if certification.passed:
        logger.info(f"✅ Bias certified for n={n} k={k}")
    else:
        logger.warning(f"⚠️ {len(certification.failures())} parity sizes exceed their bound (n={n}, k={k})")
    return certification


def _prefix(pmf: WeightPMF, n: int):
    """cumulative[i] = Pr[W <= -n + 2i - 2]; index 0 is empty"""
    masses = pmf.masses
    out = [Fraction(0)]
    for w in admissible_weights(n):
        out.append(out[-1] + masses.get(w, Fraction(0)))
    return out


def _mass_between(cum, n: int, a: int, b: int) -> Fraction:
    lo = max(a, -n)
    hi = min(b, n)
    if lo > hi:
        return Fraction(0)
    i = (lo + n + 1) // 2
    j = (hi + n) // 2 + 1
    return cum[j] - cum[i] if j > i else Fraction(0)


def interval_property_check(source: WeightPMF, result: WeightPMF, k: int) -> bool:
    """Pr[result in [a-k, b+k]] >= Pr[source in [a, b]] for every admissible a <= b"""
    if source.n != result.n:
        raise DimensionMismatchError("source and result must share n")
    n = source.n
    cs, cr = _prefix(source, n), _prefix(result, n)
    weights = admissible_weights(n)
    for i, a in enumerate(weights):
        for b in weights[i:]:
            if _mass_between(cr, n, a - k, b + k) < _mass_between(cs, n, a, b):
                logger.debug(f"Interval [{a}, {b}] loses mass after the pipeline")
                return False
    return True


@dataclass(frozen=True)
class PipelineReport:
    source: WeightPMF
    sparse: WeightPMF
    result: WeightPMF
    k: int
    certification: Certification
    interval_ok: bool
    support_ok: bool
    source_interval_ok: bool


def pipeline_report(pmf: WeightPMF, k: int) -> PipelineReport:
    """
    Run the pipeline and collect every check on its output

    interval_ok compares the output with the sparsified law, where each atom
    moves by at most 2 per round. source_interval_ok repeats the check against
    the input law and is informational only.
    """
    sparse, result = _stages(pmf, k)
    return PipelineReport(
        source=pmf,
        sparse=sparse,
        result=result,
        k=k,
        certification=certify_bias(result, k),
        interval_ok=interval_property_check(sparse, result, k),
        support_ok=len(result) <= (k + 1) ** 2 and is_k_uniform(result, k),
        source_interval_ok=interval_property_check(pmf, result, k),
    )
