"""Command-line interface.

Three subcommands: ``analyze`` (any system file), ``double-slit`` (parametric
two-slit scenario, single point or seeded sweep), and ``qq`` (question-order
diagnostics for rank-2 files).  Reports go to stdout, diagnostics to stderr,
and the exit code is the verdict channel for scripting:

* 0 - noncontextual
* 1 - input error (unreadable file, invalid system, unsupported shape)
* 2 - internal error (solver failure, method disagreement)
* 3 - contextual

Set CBD_LOG=debug (or any standard level name) for verbose diagnostics.
"""

from __future__ import annotations

import logging
import os
import sys

import click
import numpy as np

from . import __version__
from .coupling import CouplingConstraint, FeasibilityVerdict, decide
from .cyclic import (
    CriterionResult,
    cbd_cyclic2,
    cbd_cyclic4,
    chsh_fine,
    detect_cyclic,
    qq_statistic,
)
from .errors import CbdError, InconsistentSystemError, SolverError
from .fileio import parse_system_text
from .report import (
    CONTEXTUAL,
    NONCONTEXTUAL,
    criterion_entry,
    engine_entry,
    lp_entry,
    overall_verdict,
    render_json,
    render_text,
    system_summary,
    witness_entry,
)
from .scenarios import (
    DoubleSlitParams,
    build_double_slit,
    check_double_slit,
    sample_double_slit_params,
)
from .system import EPS_PROB, System, consistency

EXIT_NONCONTEXTUAL = 0
EXIT_INPUT_ERROR = 1
EXIT_INTERNAL_ERROR = 2
EXIT_CONTEXTUAL = 3

log = logging.getLogger("cbdsys")

_CONSTRAINTS = {c.value: c for c in CouplingConstraint}


def _emit(report: dict, output: str) -> None:
    text = render_json(report) if output == "json" else render_text(report)
    click.echo(text, nl=False)


def _fail(message: str, code: int) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _closed_form(
    system: System, layout, constraint: CouplingConstraint
) -> tuple[str, CriterionResult]:
    """Pick the applicable closed-form criterion, or raise a CbdError."""
    if constraint is CouplingConstraint.MAX_EQUALITY:
        if layout.rank == 4:
            return "cyclic4", cbd_cyclic4(system, layout)
        return "cyclic2", cbd_cyclic2(system, layout)
    # Equal-always has a quoted closed form only for consistently connected
    # systems, where it coincides with the maximal-equality criterion.
    if layout.rank == 4:
        return "chsh_fine", chsh_fine(system, layout)
    if consistency(system).max_marginal_gap > EPS_PROB:
        raise InconsistentSystemError(
            "no closed form for equal-always on inconsistently connected systems;"
            " use --method lp"
        )
    return "cyclic2", cbd_cyclic2(system, layout)


def _read_system(stream) -> System:
    return parse_system_text(stream.read())


@click.group()
@click.version_option(version=__version__, prog_name="cbdsys")
def cli() -> None:
    """Contextuality analysis for context-content systems of binary variables."""


@cli.command()
@click.option("--input", "input_stream", type=click.File("r"), required=True,
              help="System file (JSON); '-' reads stdin.")
@click.option("--constraint", type=click.Choice(sorted(_CONSTRAINTS)),
              default=CouplingConstraint.MAX_EQUALITY.value, show_default=True,
              help="Coupling property demanded of within-connection pairs.")
@click.option("--method", type=click.Choice(["auto", "closed-form", "lp", "both"]),
              default="auto", show_default=True,
              help="auto = closed form for cyclic rank 2/4, LP otherwise.")
@click.option("--output", type=click.Choice(["text", "json"]), default="text",
              show_default=True)
@click.option("--witness", is_flag=True,
              help="Include the coupling distribution when the LP finds one.")
def analyze(input_stream, constraint: str, method: str, output: str, witness: bool):
    """Decide whether the system in a file is contextual."""
    want = _CONSTRAINTS[constraint]
    try:
        system = _read_system(input_stream)
    except CbdError as exc:
        _fail(str(exc), EXIT_INPUT_ERROR)

    layout = detect_cyclic(system)
    run_closed = method in ("closed-form", "both")
    run_lp = method in ("lp", "both")
    if method == "auto":
        if layout is not None and (
            want is CouplingConstraint.MAX_EQUALITY
            or consistency(system).consistently_connected
        ):
            run_closed = True
        else:
            run_lp = True
    if run_closed and layout is None:
        _fail(
            "closed-form criteria need a cyclic system of rank 2 or 4;"
            " use --method lp",
            EXIT_INPUT_ERROR,
        )

    results: list[dict] = []
    lp_verdict: FeasibilityVerdict | None = None
    try:
        if run_closed:
            name, result = _closed_form(system, layout, want)
            results.append(criterion_entry(name, result))
        if run_lp:
            lp_verdict = decide(system, want)
            results.append(lp_entry(want, lp_verdict))
    except SolverError as exc:
        _fail(str(exc), EXIT_INTERNAL_ERROR)
    except CbdError as exc:
        _fail(str(exc), EXIT_INPUT_ERROR)

    report = {
        "command": "analyze",
        "constraint": want.value,
        "method": method,
        "system": system_summary(system),
        "results": results,
    }
    agreement = None
    if len(results) > 1:
        agreement = len({entry["noncontextual"] for entry in results}) == 1
        report["agreement"] = agreement
    if witness:
        report["witness"] = witness_entry(lp_verdict) if lp_verdict else None
    report["verdict"] = overall_verdict(results) if agreement in (None, True) else "disagreement"
    report["engine"] = engine_entry()
    _emit(report, output)

    if agreement is False:
        _fail("closed-form and LP verdicts disagree", EXIT_INTERNAL_ERROR)
    sys.exit(
        EXIT_NONCONTEXTUAL if report["verdict"] == NONCONTEXTUAL else EXIT_CONTEXTUAL
    )


@cli.command("double-slit")
@click.option("--p", type=float, default=None,
              help="Pr[detector] with only the left slit open.")
@click.option("--q", type=float, default=None,
              help="Pr[detector] with only the right slit open.")
@click.option("--pp", type=float, default=None,
              help="Pr[through left slit only], both slits open.")
@click.option("--qp", type=float, default=None,
              help="Pr[through right slit only], both slits open.")
@click.option("--rp", type=float, default=None,
              help="Pr[through both slits], both slits open.")
@click.option("--sweep", type=int, default=None, metavar="N",
              help="Analyze N random admissible parameter sets instead.")
@click.option("--seed", type=int, default=0, show_default=True,
              help="Seed for --sweep draws.")
@click.option("--output", type=click.Choice(["text", "json"]), default="text",
              show_default=True)
@click.option("--witness", is_flag=True,
              help="Include the coupling distribution (single run only).")
def double_slit(p, q, pp, qp, rp, sweep, seed, output, witness):
    """Analyze the two-slit detection scenario (always noncontextual)."""
    point = [p, q, pp, qp, rp]
    if sweep is not None:
        if any(v is not None for v in point):
            _fail("--sweep replaces the explicit parameters", EXIT_INPUT_ERROR)
        _double_slit_sweep(sweep, seed, output)
        return
    if any(v is None for v in point):
        _fail("need all of --p --q --pp --qp --rp (or --sweep N)", EXIT_INPUT_ERROR)
    try:
        params = DoubleSlitParams(p=p, q=q, p_prime=pp, q_prime=qp, r_prime=rp)
    except CbdError as exc:
        _fail(str(exc), EXIT_INPUT_ERROR)
    try:
        closed = check_double_slit(params)
        system = build_double_slit(params)
        verdict = decide(system, CouplingConstraint.MAX_EQUALITY)
    except SolverError as exc:
        _fail(str(exc), EXIT_INTERNAL_ERROR)
    except CbdError as exc:
        _fail(str(exc), EXIT_INPUT_ERROR)

    results = [
        criterion_entry("cyclic4", closed),
        lp_entry(CouplingConstraint.MAX_EQUALITY, verdict),
    ]
    agreement = closed.noncontextual == verdict.feasible
    report = {
        "command": "double-slit",
        "params": {
            "p": params.p,
            "q": params.q,
            "p_prime": params.p_prime,
            "q_prime": params.q_prime,
            "r_prime": params.r_prime,
        },
        "system": system_summary(system),
        "results": results,
        "agreement": agreement,
    }
    if witness:
        report["witness"] = witness_entry(verdict)
    report["verdict"] = overall_verdict(results) if agreement else "disagreement"
    report["engine"] = engine_entry()
    _emit(report, output)
    if not agreement:
        _fail("closed-form and LP verdicts disagree", EXIT_INTERNAL_ERROR)
    sys.exit(
        EXIT_NONCONTEXTUAL if report["verdict"] == NONCONTEXTUAL else EXIT_CONTEXTUAL
    )


def _double_slit_sweep(sweep: int, seed: int, output: str) -> None:
    if sweep <= 0:
        _fail("--sweep must be positive", EXIT_INPUT_ERROR)
    rng = np.random.default_rng(seed)
    noncontextual = contextual = disagreements = 0
    try:
        for i in range(sweep):
            params = sample_double_slit_params(rng)
            closed = check_double_slit(params)
            verdict = decide(build_double_slit(params), CouplingConstraint.MAX_EQUALITY)
            if closed.noncontextual != verdict.feasible:
                disagreements += 1
                log.warning("draw %d: closed form and LP disagree (%r)", i, params)
            if closed.noncontextual:
                noncontextual += 1
            else:
                contextual += 1
    except SolverError as exc:
        _fail(str(exc), EXIT_INTERNAL_ERROR)
    report = {
        "command": "double-slit-sweep",
        "sweep": sweep,
        "seed": seed,
        "counts": {
            "noncontextual": noncontextual,
            "contextual": contextual,
            "disagreements": disagreements,
        },
        "verdict": NONCONTEXTUAL if contextual == 0 else CONTEXTUAL,
        "engine": engine_entry(),
    }
    _emit(report, output)
    if disagreements:
        _fail(f"{disagreements} closed-form/LP disagreements", EXIT_INTERNAL_ERROR)
    sys.exit(EXIT_NONCONTEXTUAL if contextual == 0 else EXIT_CONTEXTUAL)


@cli.command()
@click.option("--input", "input_stream", type=click.File("r"), required=True,
              help="Rank-2 system file (JSON); '-' reads stdin.")
@click.option("--output", type=click.Choice(["text", "json"]), default="text",
              show_default=True)
def qq(input_stream, output: str):
    """Question-order diagnostics: QQ statistic plus the rank-2 criterion."""
    try:
        system = _read_system(input_stream)
    except CbdError as exc:
        _fail(str(exc), EXIT_INPUT_ERROR)
    layout = detect_cyclic(system)
    if layout is None or layout.rank != 2:
        _fail("qq needs a cyclic system of rank 2", EXIT_INPUT_ERROR)
    statistic = qq_statistic(system, layout)
    result = cbd_cyclic2(system, layout)
    report = {
        "command": "qq",
        "system": system_summary(system),
        "qq_statistic": statistic,
        "qq_equality_holds": abs(statistic) <= EPS_PROB,
        "results": [criterion_entry("cyclic2", result)],
        "verdict": NONCONTEXTUAL if result.noncontextual else CONTEXTUAL,
        "engine": engine_entry(),
    }
    _emit(report, output)
    sys.exit(
        EXIT_NONCONTEXTUAL if result.noncontextual else EXIT_CONTEXTUAL
    )


def main(argv: list[str] | None = None) -> None:
    """Entry point wrapping click so input errors exit 1, not click's 2."""
    level = os.environ.get("CBD_LOG", "").upper()
    if level:
        logging.basicConfig(
            level=getattr(logging, level, logging.INFO), stream=sys.stderr
        )
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as exc:
        sys.exit(exc.exit_code)
    except click.ClickException as exc:
        exc.show()
        sys.exit(EXIT_INPUT_ERROR)
    sys.exit(0)


if __name__ == "__main__":
    main()
