"""Command-line front end: `python -m src.cli <command> [options]`.

Exit codes: 0 success, 1 infeasible program or failed check, 2 usage or
input error. Machine output goes to stdout (or --output); logs go to stderr.
"""
import json
from fractions import Fraction
from functools import wraps
from typing import Callable, List, Optional

import click
import mpmath
import pandas as pd

from src.config import VERIFY_SUITES, get_settings
from src.core.weights import WeightPMF, binomial_pmf, slice_pmf, tail_mass
from src.distinguish.scenarios import SCENARIOS, run_separation
from src.gaussmix.checkers import series_lower_check
from src.gaussmix.hankel import gapmiddle_lower
from src.gaussmix.mixture import GaussMixture, best_mixture_fit, interval_advantage, sup_distance
from src.gaussmix.vandermonde import inverse_entry_bound_check, vandermonde_power_count_check
from src.krawtchouk.bias import bias_profile
from src.lp.constructions import (
    MAX_TAIL,
    OBJECTIVES,
    construct_k_uniform,
    extremal_tail,
    next_even_moment,
    residue_filter,
    slab_filter,
    sparsify,
)
from src.models.schemas import (
    BiasProfileRecord,
    CertificationRowRecord,
    CheckReport,
    LPSolutionRecord,
    ParamSet,
    PipelineRecord,
    WeightPMFRecord,
)
from src.noise.kernels import replace_noise, smooth
from src.transform.pipeline import pipeline_report
from src.utils.errors import LabError
from src.utils.formatting import FORMATS, decimal_columns, pmf_frame, records_frame, render, render_decimal
from src.utils.logger import get_logger, route_logs_to_stderr, set_level
from src.utils.rationals import format_rational, to_fraction

logger = get_logger(__name__)

CONSTRUCT_OBJECTIVES = ("feasible", "max_moment", "min_moment")
GAUSSMIX_TASKS = ("fit", "distance", "inverse", "powers", "gapmiddle", "series")


class InputError(click.ClickException):
    """Invalid values or inputs; exits with the usage code"""
    exit_code = 2


class RationalType(click.ParamType):
    name = "rational"

    def convert(self, value, param, ctx):
        if isinstance(value, Fraction):
            return value
        try:
            return to_fraction(str(value))
        except LabError:
            self.fail(f"{value!r} is not a rational like 3/4", param, ctx)


RATIONAL = RationalType()


def lab_command(func: Callable) -> Callable:
    """Turn lab and validation errors into exit code 2"""
    @wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except (LabError, ValueError) as e:
            logger.error(f"❌ {func.__name__}: {e}")
            raise InputError(str(e))
    return wrapper


def output_options(func: Callable) -> Callable:
    func = click.option("--output", type=click.Path(dir_okay=False), default=None,
                        help="Write to FILE instead of stdout")(func)
    func = click.option("--format", "fmt", type=click.Choice(FORMATS), default="json", show_default=True)(func)
    return func


def source_options(func: Callable) -> Callable:
    func = click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False), default=None,
                        help="JSON weight law (or any record embedding one)")(func)
    func = click.option("--slice", "slice_weight", type=int, default=None, help="Use the slice of this weight")(func)
    func = click.option("--n", type=int, default=None, help="Dimension (binomial law unless --slice)")(func)
    return func


def filter_options(func: Callable) -> Callable:
    func = click.option("--slab", type=RATIONAL, default=None, help="Keep weights with |w| <= W")(func)
    func = click.option("--residue", type=int, default=0, show_default=True, help="Residue a for --mod")(func)
    func = click.option("--mod", "modulus", type=int, default=None, help="Keep weights congruent to a mod M")(func)
    return func


def load_source(n: Optional[int], slice_weight: Optional[int], input_path: Optional[str]) -> WeightPMF:
    if input_path:
        with open(input_path, encoding="utf-8") as handle:
            data = json.load(handle)
        for key in ("primal", "result"):
            if key in data and isinstance(data[key], dict):
                data = data[key]
        return WeightPMFRecord(**data).to_domain()
    if n is None:
        raise InputError("either --n or --input is required")
    if slice_weight is not None:
        return slice_pmf(n, slice_weight)
    return binomial_pmf(n)


def build_filter(modulus: Optional[int], residue: int, slab) -> Optional[Callable[[int], bool]]:
    checks = []
    if modulus is not None:
        checks.append(residue_filter(modulus, residue))
    if slab is not None:
        checks.append(slab_filter(slab))
    if not checks:
        return None
    return lambda w: all(f(w) for f in checks)


def emit(payload, fmt: str, output: Optional[str], frame: Optional[pd.DataFrame] = None) -> None:
    text = render(payload, fmt, frame)
    if output:
        with open(output, "w", encoding="utf-8") as handle:
            handle.write(text + "\n")
        logger.info(f"✅ Wrote {fmt} output to {output}")
    else:
        click.echo(text)


def emit_pmf(pmf: WeightPMF, fmt: str, output: Optional[str]) -> None:
    emit(WeightPMFRecord.from_domain(pmf), fmt, output, pmf_frame(pmf, decimals=fmt == "table"))


def emit_solution(solution, fmt: str, output: Optional[str]) -> None:
    record = LPSolutionRecord.from_domain(solution)
    if solution.primal is not None:
        frame = pmf_frame(solution.primal, decimals=fmt == "table")
    else:
        frame = records_frame([{"status": solution.status}])
    emit(record, fmt, output, frame)


@click.group()
@click.option("--log-level", default=None, help="Override LAB_LOG_LEVEL")
@click.option("--threads", type=int, default=None, help="Worker threads for sweeps and suites")
@click.pass_context
def cli(ctx, log_level, threads):
    """Exact laboratory for k-uniform and small-bias weight laws"""
    route_logs_to_stderr()
    settings = get_settings()
    set_level(log_level or settings.log_level)
    ctx.obj = {"threads": threads or settings.threads}


@cli.command()
@click.option("--n", type=int, required=True)
@click.option("--k", type=int, required=True)
@click.option("--objective", type=click.Choice(CONSTRUCT_OBJECTIVES), default="feasible", show_default=True,
              help="Vertex choice: first feasible, or extreme next even moment")
@filter_options
@output_options
@click.pass_context
@lab_command
def construct(ctx, n, k, objective, modulus, residue, slab, fmt, output):
    """k-uniform weight law on the filtered support"""
    support_filter = build_filter(modulus, residue, slab)
    moment = next_even_moment(k)
    weight = None if objective == "feasible" else (lambda w: Fraction(w) ** moment)
    sense = "min" if objective == "min_moment" else "max"
    solution = construct_k_uniform(n, k, support_filter, objective=weight, sense=sense)
    emit_solution(solution, fmt, output)
    if solution.primal is None:
        ctx.exit(1)


@cli.command(name="sparsify")
@source_options
@click.option("--k", type=int, required=True)
@output_options
@lab_command
def sparsify_command(n, slice_weight, input_path, k, fmt, output):
    """Reduce a k-uniform law to at most k+1 weights"""
    emit_pmf(sparsify(load_source(n, slice_weight, input_path), k), fmt, output)


@cli.command(name="smooth")
@source_options
@click.option("--rho", type=RATIONAL, default=None, help="Correlation of the N_rho noise")
@click.option("--rounds", type=int, default=None, help="Coordinate re-randomization rounds, applied first")
@output_options
@lab_command
def smooth_command(n, slice_weight, input_path, rho, rounds, fmt, output):
    """Apply re-randomization rounds and/or N_rho smoothing"""
    if rho is None and rounds is None:
        raise InputError("give --rho, --rounds or both")
    pmf = load_source(n, slice_weight, input_path)
    if rounds is not None:
        pmf = replace_noise(pmf, rounds)
    if rho is not None:
        pmf = smooth(pmf, rho)
    emit_pmf(pmf, fmt, output)


@cli.command()
@source_options
@click.option("--k", type=int, default=None, help="Report the largest bias over sizes 1..k")
@output_options
@lab_command
def bias(n, slice_weight, input_path, k, fmt, output):
    """Exact parity bias for every parity size"""
    profile = bias_profile(load_source(n, slice_weight, input_path))
    frame = records_frame([{"ell": ell, "bias": format_rational(b)} for ell, b in enumerate(profile.biases)])
    if fmt == "table":
        frame = decimal_columns(frame, ["bias"])
    emit(BiasProfileRecord.from_domain(profile), fmt, output, frame)
    if k is not None:
        logger.info(f"Largest bias over sizes 1..{k}: {max(abs(b) for b in profile.biases[1:k + 1])}")


@cli.command()
@source_options
@click.option("--t", type=int, required=True, help="Threshold")
@output_options
@lab_command
def tail(n, slice_weight, input_path, t, fmt, output):
    """Pr[W >= t]"""
    pmf = load_source(n, slice_weight, input_path)
    value = tail_mass(pmf, t)
    row = {"n": pmf.n, "t": t, "tail": format_rational(value)}
    if fmt == "table":
        row["tail_decimal"] = render_decimal(value)
    emit(row, fmt, output)


@cli.command()
@click.option("--n", type=int, required=True)
@click.option("--k", type=int, required=True)
@click.option("--t", type=int, required=True)
@click.option("--objective", type=click.Choice(OBJECTIVES), default=MAX_TAIL, show_default=True)
@filter_options
@output_options
@click.pass_context
@lab_command
def extremal(ctx, n, k, t, objective, modulus, residue, slab, fmt, output):
    """Extremal tail, point or gap over k-uniform laws, with its dual certificate"""
    solution = extremal_tail(n, k, t, objective, build_filter(modulus, residue, slab))
    emit_solution(solution, fmt, output)
    if not solution.is_optimal:
        ctx.exit(1)


@cli.command()
@source_options
@click.option("--k", type=int, required=True)
@output_options
@click.pass_context
@lab_command
def pipeline(ctx, n, slice_weight, input_path, k, fmt, output):
    """Sparsify, re-randomize floor(k/2) coordinates and certify the biases"""
    report = pipeline_report(load_source(n, slice_weight, input_path), k)
    record = PipelineRecord.from_domain(report)
    frame = records_frame([CertificationRowRecord.from_domain(r).model_dump() for r in report.certification.rows])
    emit(record, fmt, output, frame)
    if not (record.certified and record.interval_ok and record.support_ok):
        ctx.exit(1)


@cli.command()
@click.option("--scenario", type=click.Choice(SCENARIOS), required=True)
@click.option("--n", type=int, default=None)
@click.option("--k", type=int, default=None)
@click.option("--k-prime", type=int, default=None)
@click.option("--t", type=int, default=None)
@click.option("--rho", type=RATIONAL, default=None)
@click.option("--beta", type=RATIONAL, default=None)
@click.option("--c", "constant", type=RATIONAL, default=None, help="Constant in the analytic template")
@click.option("--weights", type=int, multiple=True, help="Slice weights of the mixture (thm10)")
@output_options
@click.pass_context
@lab_command
def separate(ctx, scenario, n, k, k_prime, t, rho, beta, constant, weights, fmt, output):
    """Exact distinguishing advantage of a separation scenario"""
    values = {"n": n, "k": k, "k_prime": k_prime, "t": t, "rho": rho, "beta": beta, "c": constant,
              "weights": list(weights) or None}
    params = ParamSet(**{key: (str(v) if isinstance(v, Fraction) else v)
                         for key, v in values.items() if v is not None})
    report = run_separation(scenario, params)
    record = report.to_record()
    frame = records_frame([{
        "scenario": scenario,
        "n": report.params.n,
        "k": report.params.k,
        "rho": report.params.rho,
        "t": report.threshold if report.threshold is not None else "{}..{}".format(*report.interval),
        "lhs": record.lhs,
        "rhs": record.rhs,
        "advantage": record.advantage,
        "template": record.template,
    }])
    emit(record, fmt, output, frame)
    if report.advantage <= 0:
        ctx.exit(1)


@cli.command()
@click.option("--task", type=click.Choice(GAUSSMIX_TASKS), required=True)
@click.option("--k", type=int, default=1, show_default=True)
@click.option("--sigma2", type=RATIONAL, default=Fraction(3, 4), show_default=True)
@click.option("--mean", "means", type=float, multiple=True, help="Component means (distance task)")
@click.option("--q", type=RATIONAL, default=Fraction(2), show_default=True)
@click.option("--d-half", type=RATIONAL, default=Fraction(1), show_default=True)
@click.option("--alpha", type=RATIONAL, default=Fraction(1), show_default=True)
@click.option("--x", type=RATIONAL, default=Fraction(1, 2), show_default=True)
@click.option("--seed", type=int, default=None)
@click.option("--budget", type=int, default=None, help="Function evaluations per optimizer start")
@output_options
@click.pass_context
@lab_command
def gaussmix(ctx, task, k, sigma2, means, q, d_half, alpha, x, seed, budget, fmt, output):
    """Mixture distances and the exact M_k / Vandermonde certificates"""
    if task == "fit":
        fit = best_mixture_fit(k, float(sigma2), budget=budget, seed=seed, threads=ctx.obj["threads"])
        report = CheckReport(name="gaussmix.fit", passed=True, details={
            "distance": fit.distance,
            "means": list(fit.mixture.means),
            "weights": list(fit.mixture.weights),
            "exhausted": fit.exhausted,
        })
    elif task == "distance":
        means = list(means) or [0.0] * k
        mixture = GaussMixture(len(means), tuple(means), tuple([1 / len(means)] * len(means)), float(sigma2))
        interval, gap = interval_advantage(mixture)
        report = CheckReport(name="gaussmix.distance", passed=True, details={
            "sup_distance": sup_distance(mixture), "interval": list(interval), "interval_advantage": gap,
        })
    elif task == "inverse":
        result = inverse_entry_bound_check(k, q)
        report = CheckReport(name="gaussmix.inverse", passed=result.passed, details={
            "max_entry": format_rational(result.max_entry), "max_ratio": format_rational(result.max_ratio),
            "failures": [list(f) for f in result.failures],
        })
    elif task == "powers":
        result = vandermonde_power_count_check(k)
        report = CheckReport(name="gaussmix.powers", passed=result.passed, details={
            "all_unit": result.all_unit, "failures": [list(f) for f in result.failures],
        })
    elif task == "gapmiddle":
        report = CheckReport(name="gaussmix.gapmiddle", passed=True, details={
            "lower_bound": mpmath.nstr(gapmiddle_lower(k, d_half, alpha), 15),
        })
    else:
        result = series_lower_check(x)
        report = CheckReport(name="gaussmix.series", passed=result.passed, details={
            "product_lower": mpmath.nstr(result.lhs, 15), "bound": mpmath.nstr(result.rhs, 15),
        })
    emit(report, fmt, output, records_frame([{"name": report.name, "passed": report.passed,
                                               **{k_: str(v) for k_, v in report.details.items()}}]))
    if not report.passed:
        ctx.exit(1)


@cli.command()
@click.option("--suite", "suites", type=click.Choice(VERIFY_SUITES + ["all"]), multiple=True,
              help="Suites to run (default: LAB_VERIFY_SUITES)")
@output_options
@click.pass_context
@lab_command
def verify(ctx, suites, fmt, output):
    """Run acceptance suites; exit 1 iff any check fails"""
    from src.verify.suites import run_suites

    reports: List[CheckReport] = run_suites(list(suites) or None, ctx.obj["threads"])
    frame = records_frame([{"name": r.name, "passed": r.passed} for r in reports])
    emit(reports, fmt, output, frame)
    if not all(r.passed for r in reports):
        ctx.exit(1)


if __name__ == "__main__":
    cli()
