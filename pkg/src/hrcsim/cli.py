"""Command line: hrcsim validate | run | sweep | compare | trace.

Exit codes: 0 success, 1 validation failure, 2 config error, 3 runtime timeout.
"""
from __future__ import annotations

import functools
import logging
import sys
from dataclasses import replace
from pathlib import Path

import click

from .agents import run_hifi
from .config import ConfigError, ScenarioConfig, load_config
from .experiments import emit_results, improvement_grid, run_sweep, validate as run_validation
from .invariants import check_all
from .orchestrator import SimulationTimeout, simulate

EXIT_OK, EXIT_INVALID, EXIT_CONFIG, EXIT_TIMEOUT = 0, 1, 2, 3


def _common(fn):
    @click.option("--config", "config_path", type=click.Path(dir_okay=False), help="YAML scenario file.")
    @click.option("--seed", type=int, help="Base seed; replications use seed, seed+1, ...")
    @click.option("--reps", type=click.IntRange(min=1), help="Replications per scenario.")
    @click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True,
                  help="Worker processes.")
    @click.option("--sensors", type=click.Choice(["on", "off"]), help="Override the sensor flag.")
    @click.option("--out", type=click.Path(file_okay=False), help="Directory for output files.")
    @functools.wraps(fn)
    def wrapper(config_path, seed, reps, sensors, **kw):
        try:
            cfg = load_config(config_path) if config_path else ScenarioConfig()
            over = {}
            if seed is not None:
                over["seed"] = seed
            if reps is not None:
                over["reps"] = reps
            if sensors is not None:
                over["sensors"] = sensors == "on"
            cfg = replace(cfg, **over)
        except ConfigError as e:
            click.echo(f"config error: {e}", err=True)
            sys.exit(EXIT_CONFIG)
        try:
            code = fn(cfg, **kw)
        except ConfigError as e:
            click.echo(f"config error: {e}", err=True)
            sys.exit(EXIT_CONFIG)
        except SimulationTimeout as e:
            click.echo(f"timeout: {e}", err=True)
            sys.exit(EXIT_TIMEOUT)
        sys.exit(code or EXIT_OK)
    return wrapper


def _fmt_option(fn):
    return click.option("--format", "fmt", type=click.Choice(["csv", "contour", "summary"]),
                        default="csv", show_default=True)(fn)


def _grid_options(fn):
    fn = click.option("--sl", "sl_values", type=int, multiple=True, help="SL values (repeatable).")(fn)
    fn = click.option("--ci", "ci_values", type=float, multiple=True, help="CI values (repeatable).")(fn)
    fn = click.option("--include-sl300", is_flag=True,
                      help="Keep SL=300 in sensor sweeps (dropped by default).")(fn)
    return fn


def _write(out, name: str, text: str) -> None:
    if out:
        p = Path(out)
        p.mkdir(parents=True, exist_ok=True)
        (p / name).write_text(text)


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Log warnings and progress.")
def main(verbose):
    """Human-robot collaborative bricklaying simulator."""
    logging.basicConfig(level=logging.INFO if verbose else logging.ERROR,
                        format="%(levelname)s %(name)s: %(message)s")


@main.command()
@_common
def validate(cfg, jobs, out):
    """Run the validation scenario and compare bricks/day with the reference band."""
    rep = run_validation(cfg, jobs=jobs)
    text = rep.text()
    click.echo(text, nl=False)
    _write(out, "validation.txt", text)
    return EXIT_OK if rep.ok else EXIT_INVALID


@main.command()
@_common
def run(cfg, jobs, out):
    """Simulate one scenario and print the productivity report."""
    rep = simulate(cfg, jobs=jobs)
    text = rep.to_text()
    click.echo(text, nl=False)
    _write(out, "report.jsonl", text)


def _progress(cell):
    logging.getLogger("hrcsim.sweep").info("sl=%s ci=%s mean %.3f h", cell.sl, cell.ci, cell.mean)


@main.command()
@_common
@_fmt_option
@_grid_options
def sweep(cfg, jobs, out, fmt, sl_values, ci_values, include_sl300):
    """SL x CI sweep of the configured scenario."""
    grid = run_sweep(cfg, sl_values or None, ci_values or None, jobs=jobs,
                     include_sl300=include_sl300, progress=_progress)
    click.echo(emit_results(grid, fmt, out, name="sweep"), nl=False)
    return EXIT_TIMEOUT if any(c.timed_out for c in grid.cells.values()) else EXIT_OK


@main.command()
@_common
@_fmt_option
@_grid_options
def compare(cfg, jobs, out, fmt, sl_values, ci_values, include_sl300):
    """Improvement grid of sensors over no sensors for the configured scenario."""
    from .experiments import default_sl_values
    sls = sl_values or default_sl_values(True, include_sl300)
    base = run_sweep(replace(cfg, sensors=False), sls, ci_values or None, jobs=jobs, progress=_progress)
    with_s = run_sweep(replace(cfg, sensors=True), sls, ci_values or None, jobs=jobs, progress=_progress)
    if out:
        emit_results(base, fmt, out, name="no_sensors")
        emit_results(with_s, fmt, out, name="sensors")
    click.echo(emit_results(improvement_grid(base, with_s), fmt, out, name="improvement"), nl=False)
    cells = list(base.cells.values()) + list(with_s.cells.values())
    return EXIT_TIMEOUT if any(c.timed_out for c in cells) else EXIT_OK


@main.command()
@_common
@click.option("--check/--no-check", default=True, show_default=True,
              help="Run the trace invariant checkers.")
def trace(cfg, jobs, out, check):
    """Single detailed run with its event trace (JSON lines)."""
    from .orchestrator import generalize
    kp = cfg.key_params or generalize(cfg)
    res = run_hifi(cfg, seed=cfg.seed, key_params=kp, trace=True)
    if out:
        _write(out, "trace.jsonl", res.trace)
        click.echo(f"trace written to {Path(out) / 'trace.jsonl'} ({res.hours:.3f} h)")
    else:
        click.echo(res.trace, nl=False)
    if not res.completed:
        click.echo("timeout: task not completed", err=True)
        return EXIT_TIMEOUT
    if check:
        bad = {k: v for k, v in check_all(res.trace).items() if v}
        for k, v in bad.items():
            click.echo(f"invariant {k}: {len(v)} violation(s); first: {v[0]}", err=True)
        if bad:
            return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    main()
