"""Command-line front end.

Exit codes: 0 success, 1 invalid input, 2 internal consistency failure,
3 verification failure.
"""

from __future__ import annotations

import sys

import click

from . import chain
from .braid import BraidError, expand_quasipositive, parse_braid, parse_quasipositive, to_grid
from .fixtures import fixture, fixture_names
from .grid import GridError, format_grid, read_grid
from .invariants import NotDivisible, braid_report, compute_report, quasipositive_report
from .suites import SUITES, SuiteConfig, run_suite

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INTERNAL = 2
EXIT_VERIFY = 3


class InputError(click.ClickException):
    exit_code = EXIT_INPUT


def _fail(code: int, message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _max_grid_option(f):
    return click.option("--max-grid", type=click.IntRange(2, chain.MAX_ENCODABLE_SIZE),
                        default=chain.DEFAULT_MAX_SIZE, show_default=True,
                        help="Largest grid size to accept.")(f)


def _threads_option(f):
    return click.option("--threads", type=click.IntRange(1, None), default=None,
                        help="Worker threads (default: GRIDTAU_THREADS or all cores).")(f)


def _sources(braid, qp, grid, fixture_name) -> None:
    given = [s for s in (braid, qp, grid, fixture_name) if s is not None]
    if len(given) != 1:
        raise InputError("give exactly one of --braid, --qp, --grid, --fixture")


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def main() -> None:
    """Concordance invariants of links from grid diagrams."""


@main.command()
@click.option("--braid", help='Braid word, e.g. "2: 1 1 1".')
@click.option("--qp", help='Quasipositive word, e.g. "3: (2 | 1)".')
@click.option("--grid", "grid_path", type=click.Path(dir_okay=False), help="Grid file.")
@click.option("--fixture", "fixture_name", help=f"Built-in grid: {', '.join(fixture_names())}.")
@click.option("--format", "fmt", type=click.Choice(["table", "json"]), default="table", show_default=True)
@click.option("--assoc-graded", is_flag=True, help="Include the bigraded homology table.")
@click.option("--oracle", is_flag=True, help="Cross-check the reduction against rank computations.")
@_max_grid_option
@_threads_option
def compute(braid, qp, grid_path, fixture_name, fmt, assoc_graded, oracle, max_grid, threads) -> None:
    """Compute tau invariants and run the applicable checks."""
    _sources(braid, qp, grid_path, fixture_name)
    chain.set_threads(threads)
    opts = dict(assoc_graded=assoc_graded, oracle=oracle, max_size=max_grid)
    try:
        if braid is not None:
            report = braid_report(parse_braid(braid), **opts)
        elif qp is not None:
            report = quasipositive_report(parse_quasipositive(qp), **opts)
        elif grid_path is not None:
            report = compute_report(read_grid(grid_path), description=f"grid {grid_path}", **opts)
        else:
            try:
                f = fixture(fixture_name)
            except KeyError as exc:
                raise InputError(str(exc.args[0])) from None
            report = compute_report(f.grid, description=f"fixture {f.name}", braid=f.braid, **opts)
    except (BraidError, GridError, chain.GridSizeError, OSError) as exc:
        raise InputError(str(exc)) from None
    except (chain.ComplexInconsistency, NotDivisible) as exc:
        _fail(EXIT_INTERNAL, f"internal consistency failure: {exc}")
    click.echo(report.to_json() if fmt == "json" else report.to_table(), nl=fmt == "json")


@main.command()
@click.option("--suite", type=click.Choice(SUITES + ("all",)), default="all", show_default=True)
@click.option("--seed", type=int, default=7, show_default=True)
@click.option("--max-grid", type=click.IntRange(2, chain.MAX_ENCODABLE_SIZE), default=7, show_default=True,
              help="Largest grid for random braid cases.")
@_threads_option
def verify(suite, seed, max_grid, threads) -> None:
    """Run a verification suite; exits 3 if any check fails."""
    chain.set_threads(threads)
    try:
        results = run_suite(suite, SuiteConfig(seed=seed, max_grid=max_grid))
    except (chain.ComplexInconsistency, NotDivisible) as exc:
        _fail(EXIT_INTERNAL, f"internal consistency failure: {exc}")
    failed = 0
    for c in results:
        failed += not c.passed
        click.echo(f"{c.status.upper():<5} {c.name}" + (f"  [{c.detail}]" if c.detail else ""))
    click.echo(f"{len(results) - failed}/{len(results)} checks passed")
    if failed:
        sys.exit(EXIT_VERIFY)


@main.command()
@click.option("--braid", help='Braid word, e.g. "2: 1 1".')
@click.option("--qp", help='Quasipositive word, e.g. "2: (|1)(|1)".')
def convert(braid, qp) -> None:
    """Print the grid file for a braid closure."""
    if (braid is None) == (qp is None):
        raise InputError("give exactly one of --braid, --qp")
    try:
        w = parse_braid(braid) if braid is not None else expand_quasipositive(parse_quasipositive(qp))
    except BraidError as exc:
        raise InputError(str(exc)) from None
    click.echo(format_grid(to_grid(w)), nl=False)


if __name__ == "__main__":
    main()
