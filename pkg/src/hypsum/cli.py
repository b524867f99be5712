"""Command-line front end: evaluation, convergence sweeps, and built-in
verification suites, emitting CSV or JSON.

Exit codes: 2 parse error, 3 convergence/tail failure, 4 degenerate sweep fit,
5 verification failure.
"""

from __future__ import annotations

import json
import math
import os
import sys

import click

from . import __version__
from .asymptotics import EvalReport, evaluate, measure_order
from .continuation import TailControl
from .errors import (ConvergenceError, DegenerateFitError, DomainError,
                     ParameterError, PoleError, TailError)
from .params import SeriesParams
from .suites import SUITE_NAMES, run_suites

_REL_TOL_ENV = "HYPSUM_REL_TOL"

EXIT_PARSE = 2
EXIT_SUM_FAILURE = 3
EXIT_DEGENERATE = 4
EXIT_VERIFY_FAILED = 5


def _parse_floats(_ctx, param, value):
    if value is None:
        return None
    out = []
    for tok in value.split(","):
        tok = tok.strip()
        try:
            out.append(float(tok))
        except ValueError:
            raise click.BadParameter(f"not a decimal literal: {tok!r}", param=param)
    if not out:
        raise click.BadParameter("empty list", param=param)
    return tuple(out)


def _parse_ints(_ctx, param, value):
    if value is None:
        return None
    out = []
    for tok in value.split(","):
        tok = tok.strip()
        try:
            out.append(int(tok))
        except ValueError:
            raise click.BadParameter(f"not an integer: {tok!r}", param=param)
    if not out:
        raise click.BadParameter("empty list", param=param)
    return tuple(out)


def _parse_scale(_ctx, param, value):
    if value is None:
        return None
    if value == "pi2over4":
        return math.pi * math.pi / 4.0
    try:
        return float(value)
    except ValueError:
        raise click.BadParameter(
            f"expected a float or the token 'pi2over4', got {value!r}", param=param)


def _make_params(a, b) -> SeriesParams:
    if a is None or b is None:
        raise click.UsageError("both --a and --b are required")
    try:
        return SeriesParams(a, b)
    except ParameterError as exc:
        raise click.UsageError(str(exc))


def _default_rel_tol() -> float:
    env = os.environ.get(_REL_TOL_ENV)
    if env is None:
        return TailControl.rel_tol
    try:
        return float(env)
    except ValueError:
        raise click.UsageError(f"{_REL_TOL_ENV}={env!r} is not a float")


def _control(rel_tol, accelerate) -> TailControl:
    return TailControl(rel_tol=rel_tol if rel_tol is not None else _default_rel_tol(),
                       accelerate=accelerate)


_CSV_HEADER = "m,direct,asymptotic,residual,predicted_order,theorem"


def _fmt(x: float) -> str:
    return format(x, ".17g")


def _row_csv(r: EvalReport, scale: float | None) -> str:
    s = scale or 1.0
    return ",".join([
        str(r.m), _fmt(r.direct / s), _fmt(r.asymptotic / s), _fmt(r.residual / s),
        _fmt(r.predicted_order), r.theorem,
    ])


def _row_obj(r: EvalReport, scale: float | None) -> dict:
    s = scale or 1.0
    return {
        "m": r.m,
        "direct": r.direct / s,
        "asymptotic": r.asymptotic / s,
        "residual": r.residual / s,
        "predicted_order": r.predicted_order,
        "theorem": r.theorem,
    }


def _metadata(params: SeriesParams, rel_tol: float, scale: float | None) -> dict:
    return {
        "a": list(params.a),
        "b": list(params.b),
        "s": params.s,
        "rel_tol": rel_tol,
        "scale": scale,
        "version": __version__,
    }


def _emit(rows, metadata, fmt: str, scale, footer: dict | None = None) -> None:
    if fmt == "json":
        if rows:
            metadata = dict(metadata, theorem=rows[0].theorem)
        doc = {"metadata": metadata, "rows": [_row_obj(r, scale) for r in rows]}
        if footer:
            doc["metadata"].update(footer)
        click.echo(json.dumps(doc, indent=2))
    else:
        click.echo(_CSV_HEADER)
        for r in rows:
            click.echo(_row_csv(r, scale))
        if footer:
            parts = ",".join(f"{k}={_fmt(v) if isinstance(v, float) else v}"
                             for k, v in footer.items())
            click.echo(f"# {parts}")


@click.group()
@click.version_option(version=__version__, prog_name="hypsum")
def cli():
    """Partial sums of gamma-weighted hypergeometric series at unit argument
    and their large-m asymptotic approximations."""


_shared = [
    click.option("--a", "a", callback=_parse_floats, default=None,
                 help="Comma-separated upper parameters a_1,...,a_{p+1}."),
    click.option("--b", "b", callback=_parse_floats, default=None,
                 help="Comma-separated lower parameters b_1,...,b_p."),
    click.option("--N", "order_n", type=int, default=None,
                 help="Correction order for the non-integer expansion."),
    click.option("--force-theorem", type=click.Choice(["T2", "T3", "T4", "T5", "T6", "T7"]),
                 default=None, help="Bypass the dispatcher."),
    click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv"),
    click.option("--rel-tol", type=float, default=None,
                 help=f"Tail tolerance (default {TailControl.rel_tol}, "
                      f"overridable via {_REL_TOL_ENV})."),
    click.option("--accelerate/--no-accelerate", default=True,
                 help="Allow extrapolation for slowly converging coefficient sums."),
    click.option("--scale", callback=_parse_scale, default=None,
                 help="Divide emitted values by this factor ('pi2over4' accepted); "
                      "useful for the bare Pochhammer-form normalization."),
]


def _with_shared(f):
    for opt in reversed(_shared):
        f = opt(f)
    return f


@cli.command("eval")
@_with_shared
@click.option("--m", "ms", callback=_parse_ints, default=None, required=True,
              help="Comma-separated partial-sum lengths.")
def cmd_eval(a, b, order_n, force_theorem, fmt, rel_tol, accelerate, scale, ms):
    """One row per m: direct sum, asymptotic value, residual, mode."""
    params = _make_params(a, b)
    ctl = _control(rel_tol, accelerate)
    try:
        rows = [evaluate(params, m, N=order_n, force_theorem=force_theorem, ctl=ctl)
                for m in ms]
    except (ConvergenceError, TailError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_SUM_FAILURE)
    except (DomainError, PoleError, ParameterError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_PARSE)
    _emit(rows, _metadata(params, ctl.rel_tol, scale), fmt, scale)


@cli.command("sweep")
@_with_shared
@click.option("--m", "ms", callback=_parse_ints, default=None,
              help="Explicit comma-separated m-grid (>= 6 values, increasing).")
@click.option("--m-start", type=int, default=100, show_default=True,
              help="First m of the generated geometric grid.")
@click.option("--m-points", type=int, default=7, show_default=True,
              help="Number of grid points (ratio 2).")
def cmd_sweep(a, b, order_n, force_theorem, fmt, rel_tol, accelerate, scale,
              ms, m_start, m_points):
    """Per-m rows plus a footer with the fitted residual-order slope."""
    params = _make_params(a, b)
    ctl = _control(rel_tol, accelerate)
    if ms is None:
        ms = tuple(m_start * 2 ** k for k in range(m_points))
    if len(ms) < 6:
        raise click.UsageError("sweep needs at least 6 m-values")
    if any(ms[i + 1] <= ms[i] for i in range(len(ms) - 1)):
        raise click.UsageError("m-values must be strictly increasing")
    try:
        fit = measure_order(params, ms, N=order_n, force_theorem=force_theorem, ctl=ctl)
    except DegenerateFitError as exc:
        click.echo(f"error: degenerate fit: {exc}", err=True)
        sys.exit(EXIT_DEGENERATE)
    except (ConvergenceError, TailError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_SUM_FAILURE)
    except (DomainError, PoleError, ParameterError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_PARSE)
    footer = {"slope": fit.slope, "predicted_order": fit.predicted_order}
    _emit(list(fit.reports), _metadata(params, ctl.rel_tol, scale), fmt, scale, footer)


@cli.command("verify")
@click.option("--suite", "suites_opt", multiple=True,
              type=click.Choice(list(SUITE_NAMES)),
              help="Suite to run (repeatable; default: all).")
@click.option("--abc", callback=_parse_floats, default=None,
              help="Three comma-separated values for the corollary-2 family.")
@click.option("--m", type=int, default=1000, show_default=True)
@click.option("--p", type=int, default=3, show_default=True,
              help="p for the cross-representation suite (3 or 4).")
@click.option("--k", "k_max", type=int, default=20, show_default=True)
@click.option("--draws", type=int, default=100, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def cmd_verify(suites_opt, abc, m, p, k_max, draws, seed):
    """Run built-in verification suites; exit 0 iff all pass."""
    if abc is not None and len(abc) != 3:
        raise click.UsageError(f"--abc needs exactly three values, got {len(abc)}")
    try:
        results = run_suites(suites_opt or None, abc=abc or (0.3, 0.5, 0.7),
                             m=m, p=p, k_max=k_max, draws=draws, seed=seed)
    except (ParameterError, DomainError, PoleError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_PARSE)
    except (ConvergenceError, TailError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_SUM_FAILURE)
    width = max(len(r.name) for r in results)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        click.echo(f"{r.name:<{width}}  {status}  max_error={r.max_error:.3e}  "
                   f"threshold={r.threshold:.1e}  {r.detail}")
    if not all(r.passed for r in results):
        sys.exit(EXIT_VERIFY_FAILED)


def main():
    cli()


if __name__ == "__main__":
    main()
