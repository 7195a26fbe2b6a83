"""Batch experiment harness: many seeded runs over many graphs.

Mirrors the measurement protocol the package is built around: generate
or load a list of graphs, run a fixed number of independent search
chains on each with derived per-run seeds, compare against the
exhaustive oracle where it is tractable, and emit one CSV row per run
plus one JSON summary row per graph.  Execution is sequential and the
seed derivation is positional, so identical configs reproduce identical
output bytes.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from typing import Optional

from . import cascade, oracle
from .chain import (
    CSV_COLUMNS,
    ChainParams,
    RunRecord,
    VARIANTS,
    derive_run_seed,
    run_search,
)
from .errors import InternalInvariantError
from .graph import Graph, graph_from_spec, read_edge_list

__all__ = [
    "ExperimentConfig",
    "GraphSummary",
    "ExperimentSummary",
    "resolve_graph_source",
    "run_experiment",
    "write_runs_csv",
]


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment: graphs x runs with shared chain parameters.

    graphs entries are edge-list file paths or generator specs (a path
    wins when both readings are possible).  seed is the base from which
    every run's seed is derived positionally.  oracle controls whether
    the exhaustive optimum is computed per graph (skipped with a note
    when the graph exceeds the oracle's size guard).
    """

    graphs: tuple[str, ...]
    runs: int
    epsilon: float = 0.2
    budget_mult: float = 100.0
    variant: str = "jump"
    seed: int = 0
    oracle: bool = True
    check_reachable: bool = False
    csv_out: Optional[str] = None
    summary_out: Optional[str] = None

    def __post_init__(self):
        if not self.graphs:
            raise ValueError("config needs at least one graph source")
        if self.runs < 1:
            raise ValueError(f"runs must be >= 1, got {self.runs}")
        if not 0.0 < self.epsilon <= 1.0:
            raise ValueError(f"epsilon must be in (0, 1], got {self.epsilon}")
        if self.budget_mult <= 0:
            raise ValueError(f"budget_mult must be positive, got {self.budget_mult}")
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}, got {self.variant!r}")

    @classmethod
    def from_json_file(cls, path: str) -> "ExperimentConfig":
        with open(path) as fh:
            raw = json.load(fh)
        return cls.from_dict(raw)

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentConfig":
        known = {
            "graphs",
            "runs",
            "epsilon",
            "budget_mult",
            "variant",
            "seed",
            "oracle",
            "check_reachable",
            "csv_out",
            "summary_out",
        }
        unknown = set(raw) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        if "graphs" not in raw or "runs" not in raw:
            raise ValueError("config must define 'graphs' and 'runs'")
        raw = dict(raw)
        raw["graphs"] = tuple(str(s) for s in raw["graphs"])
        return cls(**raw)


@dataclass(frozen=True)
class GraphSummary:
    graph_index: int
    source: str
    n: int
    m: int
    digest: str
    optimum: Optional[int]
    best_mean: float
    best_min: int
    best_max: int
    final_mean: float
    frac_optimal: Optional[float]

    def to_json_dict(self) -> dict:
        return {
            "graph_index": self.graph_index,
            "source": self.source,
            "n": self.n,
            "m": self.m,
            "digest": self.digest,
            "optimum": self.optimum,
            "best_mean": self.best_mean,
            "best_min": self.best_min,
            "best_max": self.best_max,
            "final_mean": self.final_mean,
            "frac_optimal": self.frac_optimal,
        }


@dataclass(frozen=True)
class ExperimentSummary:
    config_seed: int
    runs_per_graph: int
    rows: tuple[GraphSummary, ...]

    def to_json_dict(self) -> dict:
        return {
            "seed": self.config_seed,
            "runs_per_graph": self.runs_per_graph,
            "graphs": [row.to_json_dict() for row in self.rows],
        }


def resolve_graph_source(source: str, default_seed: Optional[int] = None) -> Graph:
    """Load a graph from a file path, else parse as a generator spec."""
    if os.path.exists(source):
        return read_edge_list(source)
    g, _ = graph_from_spec(source, default_seed=default_seed)
    return g


def run_experiment(
    config: ExperimentConfig,
) -> tuple[list[tuple[int, int, Graph, RunRecord]], ExperimentSummary]:
    """Execute every (graph, run) cell of the config.

    Returns (records, summary) where records holds one
    (graph_index, run_id, graph, RunRecord) tuple per run, in
    deterministic order.  Raises InternalInvariantError if any run's
    best set fails re-verification or beats the oracle optimum, since
    either would mean the machinery is lying somewhere.
    """
    records: list[tuple[int, int, Graph, RunRecord]] = []
    summaries: list[GraphSummary] = []
    run_id = 0
    for gi, source in enumerate(config.graphs):
        g = resolve_graph_source(source, default_seed=config.seed)
        optimum: Optional[int] = None
        if config.oracle and g.n <= oracle.OPTIMUM_MAX_N:
            optimum, _ = oracle.exhaustive_optimum(g)
        budget = int(round(config.budget_mult * g.n))
        best_sizes: list[int] = []
        final_sizes: list[int] = []
        for r in range(config.runs):
            params = ChainParams(
                epsilon=config.epsilon,
                budget=budget,
                variant=config.variant,
                seed=derive_run_seed(config.seed, gi, r),
            )
            rec = run_search(g, params, check_reachable=config.check_reachable)
            if not cascade.is_valid(g, rec.best_x.support()):
                raise InternalInvariantError(
                    f"graph {gi} run {r}: reported best set is not valid"
                )
            if optimum is not None and rec.best_size < optimum:
                raise InternalInvariantError(
                    f"graph {gi} run {r}: best size {rec.best_size} beats "
                    f"the exhaustive optimum {optimum}"
                )
            best_sizes.append(rec.best_size)
            final_sizes.append(rec.final_x.weight())
            records.append((gi, run_id, g, rec))
            run_id += 1
        summaries.append(
            GraphSummary(
                graph_index=gi,
                source=source,
                n=g.n,
                m=g.m,
                digest=g.digest(),
                optimum=optimum,
                best_mean=sum(best_sizes) / len(best_sizes),
                best_min=min(best_sizes),
                best_max=max(best_sizes),
                final_mean=sum(final_sizes) / len(final_sizes),
                frac_optimal=(
                    None
                    if optimum is None
                    else sum(1 for b in best_sizes if b == optimum) / len(best_sizes)
                ),
            )
        )
    summary = ExperimentSummary(
        config_seed=config.seed,
        runs_per_graph=config.runs,
        rows=tuple(summaries),
    )
    return records, summary


def write_runs_csv(
    records: list[tuple[int, int, Graph, RunRecord]], path: str
) -> None:
    """One row per run, fixed column order, graph_index appended last."""
    import csv

    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(CSV_COLUMNS) + ["graph_index"])
        for gi, run_id, g, rec in records:
            writer.writerow(rec.to_csv_row(run_id, g) + [gi])
