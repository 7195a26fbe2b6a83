"""Command-line front end.

Subcommands: gen, solve, verify, oracle, experiment.  Global options
(seed, epsilon, budget multiplier, variant, trim, online state checks,
output format and path) sit on the group, before the subcommand.

Exit codes: 0 success, 1 usage or I/O problems, 2 a requested
verification came back false, 3 an internal invariant was violated.
"""

from __future__ import annotations

import dataclasses
import json
import os
from fractions import Fraction

import click

from . import cascade
from . import oracle as oracle_mod
from .chain import CSV_COLUMNS, ChainParams, run_search
from .errors import InternalInvariantError, VerificationFailure
from .experiment import (
    ExperimentConfig,
    resolve_graph_source,
    run_experiment,
    write_runs_csv,
)
from .game import from_support, potential_majority
from .graph import graph_from_spec, write_edge_list

__all__ = ["cli", "main"]


def _parse_epsilon(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise click.UsageError(f"--epsilon must be a number, got {text!r}")
    if not 0 < value <= 1:
        raise click.UsageError(f"--epsilon must be in (0, 1], got {text}")
    return value


def _parse_node_list(text: str) -> list[int]:
    """Comma-separated node ids; '-' or an empty string is the empty set."""
    text = text.strip()
    if text in ("", "-"):
        return []
    try:
        return [int(part) for part in text.split(",")]
    except ValueError:
        raise click.UsageError(f"expected comma-separated node ids, got {text!r}")


def _emit(text: str, out: str | None) -> None:
    if out is None:
        click.echo(text)
    else:
        with open(out, "w") as fh:
            fh.write(text + "\n")


@click.group()
@click.option("--seed", type=int, default=0, show_default=True,
              help="Base RNG seed (also the default seed for generator specs).")
@click.option("--epsilon", default="0.2", show_default=True,
              help="Up-flip probability of the search chain; decimals or ratios like 1/5.")
@click.option("--budget-mult", type=float, default=100.0, show_default=True,
              help="Chain step budget as a multiple of the node count.")
@click.option("--variant", type=click.Choice(["plain", "jump"]), default="jump",
              show_default=True,
              help="plain keeps self-loop steps; jump picks only among feasible flips.")
@click.option("--trim", is_flag=True,
              help="Shrink reported sets to minimal ones before output.")
@click.option("--check-z", is_flag=True,
              help="Re-verify every visited chain state with the closure test.")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json",
              show_default=True, help="Output format for solve results.")
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Write output to this path instead of stdout "
                   "(for experiment: a path prefix).")
@click.pass_context
def cli(ctx, seed, epsilon, budget_mult, variant, trim, check_z, fmt, out):
    """Find and verify small node sets that, pinned to 1, pull a whole
    network to all-ones under asynchronous majority dynamics."""
    if budget_mult <= 0:
        raise click.UsageError(f"--budget-mult must be positive, got {budget_mult}")
    if seed < 0:
        raise click.UsageError(f"--seed must be non-negative, got {seed}")
    ctx.obj = {
        "seed": seed,
        "epsilon": _parse_epsilon(epsilon),
        "budget_mult": budget_mult,
        "variant": variant,
        "trim": trim,
        "check_z": check_z,
        "fmt": fmt,
        "out": out,
    }


@cli.command()
@click.argument("spec")
@click.pass_obj
def gen(obj, spec):
    """Generate a graph from SPEC and write it as an edge list.

    SPEC examples: clique:5, path:6, cycle:5, star:3, doublestar,
    er:20:0.5:seed=7, tree:10:seed=3.  Random families fall back to the
    global --seed when no inline seed is given.
    """
    g, used_seed = graph_from_spec(spec, default_seed=obj["seed"])
    if obj["out"] is not None:
        write_edge_list(g, obj["out"])
        click.echo(f"wrote {obj['out']} (n={g.n}, m={g.m})", err=True)
    else:
        lines = [f"{g.n} {g.m}"] + [f"{u} {v}" for u, v in g.edges()]
        click.echo("\n".join(lines))
    if used_seed is not None:
        click.echo(f"seed={used_seed}", err=True)


@cli.command()
@click.argument("graph")
@click.pass_obj
def solve(obj, graph):
    """Search GRAPH (a file path or generator spec) for a small control set."""
    g = resolve_graph_source(graph, default_seed=obj["seed"])
    params = ChainParams(
        epsilon=float(obj["epsilon"]),
        budget=int(round(obj["budget_mult"] * g.n)),
        variant=obj["variant"],
        seed=obj["seed"],
    )
    record = run_search(g, params, check_reachable=obj["check_z"])
    best = tuple(sorted(record.best_x.support()))
    if not cascade.is_valid(g, best):
        raise InternalInvariantError(f"reported best set {best} failed re-verification")
    payload = record.to_json_dict()
    payload["n"] = g.n
    payload["m"] = g.m
    if obj["trim"]:
        trimmed = cascade.trim_to_minimal(g, best)
        payload["trimmed_set"] = list(trimmed)
        payload["trimmed_size"] = len(trimmed)
    if obj["fmt"] == "json":
        text = json.dumps(payload, indent=2)
    else:
        row = record.to_csv_row(0, g)
        text = ",".join(CSV_COLUMNS) + "\n" + ",".join(str(v) for v in row)
    _emit(text, obj["out"])


@cli.command()
@click.argument("graph")
@click.argument("nodes")
@click.option("--mode", type=click.Choice(["valid", "minimal", "witness"]),
              default="valid", show_default=True)
@click.pass_obj
def verify(obj, graph, nodes, mode):
    """Check the node set NODES (comma-separated ids, '-' for empty) on GRAPH.

    valid: does pinning the set drive the network to all-ones?
    minimal: is it valid with no redundant member?
    witness: print an activation order plus the agreeing-edge count
    along it (non-decreasing when the set is valid).

    Exits 2 when the requested predicate is false.
    """
    g = resolve_graph_source(graph, default_seed=obj["seed"])
    members = cascade.normalize_control_set(g, _parse_node_list(nodes))
    payload: dict = {"mode": mode, "set": list(members)}
    if mode == "valid":
        ok = cascade.is_valid(g, members)
        payload["valid"] = ok
    elif mode == "minimal":
        payload["valid"] = cascade.is_valid(g, members)
        ok = cascade.is_minimal(g, members)
        payload["minimal"] = ok
    else:
        order = cascade.activation_order(g, members)
        ok = order is not None
        payload["valid"] = ok
        if ok:
            x = from_support(g.n, members)
            trace = [potential_majority(g, x)]
            for i in order:
                x = x.with_bit(i, 1)
                trace.append(potential_majority(g, x))
            payload["order"] = list(order)
            payload["potential_trace"] = trace
    _emit(json.dumps(payload, indent=2), obj["out"])
    if not ok:
        raise VerificationFailure(f"{mode} check failed for set {list(members)}")


@cli.command("oracle")
@click.argument("graph")
@click.pass_obj
def oracle_cmd(obj, graph):
    """Exact small-graph report for GRAPH: optimum, state-space sizes,
    minimal-set count, reversibility and stationary-law checks."""
    g = resolve_graph_source(graph, default_seed=obj["seed"])
    report = oracle_mod.oracle_report(g, epsilon=obj["epsilon"])
    _emit(json.dumps(report, indent=2), obj["out"])


@cli.command()
@click.argument("config_path", type=click.Path(exists=True, dir_okay=False))
@click.pass_obj
def experiment(obj, config_path):
    """Run the batch protocol described by a JSON config file.

    The config defines graphs, runs, and chain parameters; outputs are
    one CSV row per run plus a JSON summary per graph.  Output paths
    come from csv_out/summary_out in the config, or from the global
    --out prefix (PREFIX.csv and PREFIX.summary.json).
    """
    config = ExperimentConfig.from_json_file(config_path)
    if obj["check_z"]:
        config = dataclasses.replace(config, check_reachable=True)
    csv_path = config.csv_out
    summary_path = config.summary_out
    if obj["out"] is not None:
        csv_path = obj["out"] + ".csv"
        summary_path = obj["out"] + ".summary.json"
    if csv_path is None or summary_path is None:
        raise click.UsageError(
            "experiment needs output paths: set csv_out and summary_out "
            "in the config, or pass --out PREFIX"
        )
    records, summary = run_experiment(config)
    for path in (csv_path, summary_path):
        parent = os.path.dirname(path)
        if parent:
            os.makedirs(parent, exist_ok=True)
    write_runs_csv(records, csv_path)
    with open(summary_path, "w") as fh:
        json.dump(summary.to_json_dict(), fh, indent=2)
        fh.write("\n")
    click.echo(json.dumps(summary.to_json_dict(), indent=2))


def main(argv=None) -> int:
    """Entry point with the documented exit-code contract."""
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as exc:
        return int(exc.exit_code)
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    except VerificationFailure as exc:
        click.echo(f"verification failed: {exc}", err=True)
        return 2
    except InternalInvariantError as exc:
        click.echo(f"internal invariant violated: {exc}", err=True)
        return 3
    except (ValueError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    return 0
