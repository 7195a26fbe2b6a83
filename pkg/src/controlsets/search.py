"""Estimator-style front end for the randomized search.

ControlSetSearch wraps run_search in the scikit-learn protocol: all
knobs are constructor parameters stored verbatim, fit(graph) runs the
chain and exposes trailing-underscore attributes, and get_params /
set_params / clone behave as usual.  There is no predict: the solver
produces one subset per graph, not per-sample outputs, so the fitted
attributes are the whole result.
"""

from __future__ import annotations

import os
from typing import Optional, Union

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from . import cascade
from .chain import ChainParams, RunRecord, run_search
from .errors import InternalInvariantError
from .graph import Graph, read_edge_list

__all__ = ["check_graph", "ControlSetSearch"]

GraphLike = Union[Graph, str, os.PathLike, tuple]


def check_graph(x: GraphLike) -> Graph:
    """Coerce solver input to a Graph.

    Accepts a Graph, a path to an edge-list file, or an (n, edges)
    pair.  Anything else raises TypeError.
    """
    if isinstance(x, Graph):
        return x
    if isinstance(x, (str, os.PathLike)):
        return read_edge_list(os.fspath(x))
    if isinstance(x, tuple) and len(x) == 2:
        n, edges = x
        return Graph.from_edge_list(int(n), edges)
    raise TypeError(
        "expected a Graph, an edge-list file path, or an (n, edges) pair, "
        f"got {type(x).__name__}"
    )


class ControlSetSearch(BaseEstimator):
    """Randomized minimum control-set search on one graph.

    Parameters
    ----------
    epsilon : up-flip acceptance probability of the search chain.
    budget_mult : steps to run, as a multiple of the node count.
    variant : "jump" (self-loop transitions removed) or "plain".
    trim : greedily shrink the best set found to a minimal one.
    random_state : seed for the run; None draws fresh entropy, so set
        it for reproducible fits.

    Attributes after fit
    --------------------
    best_set_ : tuple of node ids, a valid control set (minimal when
        trim is on).
    best_size_ : len(best_set_).
    record_ : the underlying RunRecord, including the untrimmed best
        state and the step it was found at.
    n_nodes_ : node count of the fitted graph.
    """

    def __init__(
        self,
        epsilon: float = 0.2,
        budget_mult: float = 100.0,
        variant: str = "jump",
        trim: bool = True,
        random_state: Optional[int] = None,
    ):
        self.epsilon = epsilon
        self.budget_mult = budget_mult
        self.variant = variant
        self.trim = trim
        self.random_state = random_state

    def fit(self, X: GraphLike, y=None) -> "ControlSetSearch":
        """Run the search chain on a graph and keep the best set found."""
        g = check_graph(X)
        if self.budget_mult <= 0:
            raise ValueError(f"budget_mult must be positive, got {self.budget_mult}")
        if self.random_state is None:
            seed = int(np.random.SeedSequence().entropy % (2**63))
        else:
            seed = int(self.random_state)
        params = ChainParams(
            epsilon=self.epsilon,
            budget=int(round(self.budget_mult * g.n)),
            variant=self.variant,
            seed=seed,
        )
        record: RunRecord = run_search(g, params)
        best = tuple(sorted(record.best_x.support()))
        if not cascade.is_valid(g, best):
            raise InternalInvariantError(
                f"search returned an invalid control set {best}"
            )
        if self.trim:
            best = cascade.trim_to_minimal(g, best)
        self.best_set_ = best
        self.best_size_ = len(best)
        self.record_ = record
        self.n_nodes_ = g.n
        return self

    def solution(self) -> tuple[int, ...]:
        """The fitted control set; raises NotFittedError before fit."""
        if not hasattr(self, "best_set_"):
            raise NotFittedError(
                "This ControlSetSearch instance is not fitted yet; call fit first."
            )
        return self.best_set_
