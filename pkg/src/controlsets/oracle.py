"""Exact brute-force ground truth on small graphs.

Everything here is exhaustive or dense: optimum control-set size by
subset scan, the full set of states reachable from all-ones under
down-flips, the exact transition matrix of the search chain on that
state space, its stationary law, and a detailed-balance certificate.
These routines exist to pin down correct answers that the randomized
search and the closure machinery are tested against, so they favor
obviousness over speed and carry hard size guards.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Union

import numpy as np

from . import cascade
from .errors import InternalInvariantError
from .game import Configuration, enumerate_nash_minority
from .graph import Graph

__all__ = [
    "CardinalityBoundExceeded",
    "ReachableStates",
    "TransitionMatrix",
    "exhaustive_optimum",
    "enumerate_reachable",
    "build_transition_matrix",
    "stationary_distribution",
    "check_detailed_balance",
    "enumerate_minimal_sets",
    "check_minority_nash_validity",
    "oracle_report",
]

ENUMERATION_MAX_N = 16
OPTIMUM_MAX_N = 20

EpsilonLike = Union[float, Fraction]


class CardinalityBoundExceeded(ValueError):
    """No valid set exists within the requested cardinality cap."""

    def __init__(self, bound: int):
        super().__init__(f"no valid control set of size <= {bound}")
        self.bound = bound


def exhaustive_optimum(
    g: Graph, max_k: Optional[int] = None, n_guard: int = OPTIMUM_MAX_N
) -> tuple[int, tuple[int, ...]]:
    """Smallest valid control set by brute force.

    Subsets are scanned in increasing cardinality and lexicographic
    order within each cardinality, so the returned (size, witness) pair
    is reproducible.  max_k caps the scan; if no valid set exists within
    the cap, CardinalityBoundExceeded is raised.  The n_guard keeps the
    scan at desk scale; raise it knowingly if you must.
    """
    if g.n > n_guard:
        raise ValueError(
            f"exhaustive optimum capped at n <= {n_guard}, got n={g.n}"
        )
    top = g.n if max_k is None else min(max_k, g.n)
    for k in range(top + 1):
        for comb in itertools.combinations(range(g.n), k):
            if cascade.is_valid(g, comb):
                return k, comb
    # The full node set is always valid, so only a max_k cap lands here.
    raise CardinalityBoundExceeded(top)


@dataclass(frozen=True)
class ReachableStates:
    """States reachable from all-ones by single down-flips at feasible nodes.

    states[k], masks[k] and absorbing[k] line up; index maps a state's
    bitmask back to its ordinal k.  Ordinals follow breadth-first
    discovery order from all-ones, which is deterministic.  A state is
    flagged absorbing when it has no feasible down-flip, meaning the
    zero-rate chain halts there.  Every support occurring here is a
    valid control set and vice versa (the enumeration cross-check tests
    hold the two modules to that equivalence).
    """

    states: tuple[Configuration, ...]
    masks: tuple[int, ...]
    absorbing: tuple[bool, ...]
    index: dict[int, int]

    def __len__(self) -> int:
        return len(self.states)

    def ordinal_of(self, x: Configuration) -> int:
        return self.index[x.to_mask()]

    def absorbing_states(self) -> list[Configuration]:
        return [s for s, a in zip(self.states, self.absorbing) if a]


def enumerate_reachable(g: Graph, n_guard: int = ENUMERATION_MAX_N) -> ReachableStates:
    """Breadth-first enumeration of the down-flip-reachable state space."""
    if g.n > n_guard:
        raise ValueError(
            f"state enumeration capped at n <= {n_guard}, got n={g.n}"
        )
    n = g.n
    adj = [sum(1 << j for j in nbrs) for nbrs in g.adjacency]
    deg = g.degrees
    full = (1 << n) - 1
    masks = [full]
    index = {full: 0}
    absorbing: list[bool] = []
    k = 0
    while k < len(masks):
        x = masks[k]
        k += 1
        has_down = False
        for i in range(n):
            if not (x >> i) & 1:
                continue
            if 2 * (x & adj[i]).bit_count() >= deg[i]:
                has_down = True
                child = x ^ (1 << i)
                if child not in index:
                    index[child] = len(masks)
                    masks.append(child)
        absorbing.append(not has_down)
    states = tuple(Configuration.from_mask(m_, n) for m_ in masks)
    return ReachableStates(
        states=states, masks=tuple(masks), absorbing=tuple(absorbing), index=index
    )


@dataclass(frozen=True)
class TransitionMatrix:
    """Dense one-step kernel of the plain search chain on the reachable states.

    matrix[s, t] holds the move probability; the diagonal absorbs the
    self-loop mass.  moves lists every off-diagonal transition as
    (src ordinal, dst ordinal, "down" | "up") so exact-arithmetic checks
    can rebuild entries without floating-point noise.
    """

    matrix: np.ndarray
    epsilon: float
    n: int
    states: ReachableStates
    moves: tuple[tuple[int, int, str], ...]


def build_transition_matrix(
    g: Graph, states: ReachableStates, epsilon: EpsilonLike
) -> TransitionMatrix:
    """Exact plain-chain kernel over an enumerated state space.

    Off-diagonal entries are 1/n for a down-flip and epsilon/n for an
    up-flip; each row's diagonal is the leftover mass.  An up-flip
    leaving the enumerated set would falsify the chain's confinement to
    it and raises InternalInvariantError.
    """
    eps = float(epsilon)
    if not 0.0 < eps <= 1.0:
        raise ValueError(f"epsilon must be in (0, 1], got {epsilon}")
    n = g.n
    adj = [sum(1 << j for j in nbrs) for nbrs in g.adjacency]
    deg = g.degrees
    size = len(states)
    matrix = np.zeros((size, size), dtype=float)
    moves: list[tuple[int, int, str]] = []
    for s, x in enumerate(states.masks):
        row_mass = 0.0
        for i in range(n):
            if 2 * (x & adj[i]).bit_count() < deg[i]:
                continue
            if (x >> i) & 1:
                t = states.index[x ^ (1 << i)]
                matrix[s, t] += 1.0 / n
                row_mass += 1.0 / n
                moves.append((s, t, "down"))
            else:
                child = x | (1 << i)
                t = states.index.get(child)
                if t is None:
                    raise InternalInvariantError(
                        f"up-flip at node {i} leaves the reachable set "
                        f"from state {x:0{n}b}"
                    )
                matrix[s, t] += eps / n
                row_mass += eps / n
                moves.append((s, t, "up"))
        matrix[s, s] = max(0.0, 1.0 - row_mass)
    return TransitionMatrix(
        matrix=matrix, epsilon=eps, n=n, states=states, moves=tuple(moves)
    )


def stationary_distribution(tm: TransitionMatrix, method: str = "solve") -> np.ndarray:
    """Unique stationary law of the kernel.

    method="solve" replaces one balance equation with the normalization
    row and solves the dense linear system.  method="power" iterates the
    lazy kernel (I + P)/2, which converges for any irreducible chain, to
    absolute tolerance 1e-10; it exists as an independent cross-check.
    """
    p = tm.matrix
    size = p.shape[0]
    if method == "solve":
        a = p.T - np.eye(size)
        a[-1, :] = 1.0
        b = np.zeros(size)
        b[-1] = 1.0
        pi = np.linalg.solve(a, b)
    elif method == "power":
        pi = np.full(size, 1.0 / size)
        for _ in range(1_000_000):
            nxt = 0.5 * (pi @ p) + 0.5 * pi
            if np.abs(nxt - pi).max() < 1e-10:
                pi = nxt
                break
            pi = nxt
        else:
            raise ValueError("power iteration did not converge")
    else:
        raise ValueError(f"unknown method {method!r}")
    if pi.min() <= 0:
        raise ValueError("stationary solve produced a non-positive entry")
    return pi / pi.sum()


def check_detailed_balance(tm: TransitionMatrix, epsilon: EpsilonLike) -> float:
    """Largest reversibility violation under weights epsilon**(support size).

    With a Fraction epsilon the check is exact: entries are rebuilt from
    the move list as rationals, so a correct kernel returns exactly 0.0.
    With a float epsilon the stored matrix itself is audited numerically,
    which is the mode that catches a corrupted matrix.
    """
    weights = [m.bit_count() for m in tm.states.masks]
    if isinstance(epsilon, Fraction):
        if not 0 < epsilon <= 1:
            raise ValueError(f"epsilon must be in (0, 1], got {epsilon}")
        prob: dict[tuple[int, int], Fraction] = {}
        down = Fraction(1, tm.n)
        up = epsilon / tm.n
        for s, t, kind in tm.moves:
            prob[(s, t)] = prob.get((s, t), Fraction(0)) + (down if kind == "down" else up)
        worst = Fraction(0)
        for (s, t), p_st in prob.items():
            if s > t:
                continue
            flow = epsilon**weights[s] * p_st
            back = epsilon**weights[t] * prob.get((t, s), Fraction(0))
            gap = abs(flow - back)
            if gap > worst:
                worst = gap
        return float(worst)
    eps = float(epsilon)
    w = np.array([float(eps) ** k for k in weights])
    flows = w[:, None] * tm.matrix
    return float(np.abs(flows - flows.T).max())


def enumerate_minimal_sets(
    g: Graph, n_guard: int = ENUMERATION_MAX_N
) -> list[tuple[int, ...]]:
    """All minimal control sets, as sorted node tuples.

    Candidates are the supports of the reachable states (exactly the
    valid sets); each is then tested for minimality with the closure
    machinery.  Output is ordered by (size, lexicographic).
    """
    states = enumerate_reachable(g, n_guard=n_guard)
    out = []
    for x in states.states:
        support = tuple(sorted(x.support()))
        if cascade.is_minimal(g, support):
            out.append(support)
    out.sort(key=lambda c: (len(c), c))
    return out


def check_minority_nash_validity(g: Graph) -> bool:
    """Two exhaustive facts at once, both of which must hold.

    Every minority-game Nash profile's support must be a valid control
    set, and the brute-force optimum must be at most floor(n/2), which
    follows because one side of any minority equilibrium has at most
    half the nodes.
    """
    for x in enumerate_nash_minority(g):
        if not cascade.is_valid(g, x.support()):
            return False
    size, _ = exhaustive_optimum(g)
    return size <= g.n // 2


def oracle_report(g: Graph, epsilon: EpsilonLike = Fraction(1, 5)) -> dict:
    """Bundle of exact facts about one graph, as emitted by the CLI.

    epsilon given as a Fraction makes the detailed-balance figure exact;
    the stationary comparison always runs in floats.
    """
    size, witness = exhaustive_optimum(g)
    states = enumerate_reachable(g)
    tm = build_transition_matrix(g, states, epsilon)
    pi = stationary_distribution(tm)
    weights = np.array([m.bit_count() for m in states.masks])
    target = float(epsilon) ** weights
    target = target / target.sum()
    rel = float(np.max(np.abs(pi - target) / target))
    minimal = enumerate_minimal_sets(g)
    return {
        "optimum": size,
        "witness": list(witness),
        "reachable_states": len(states),
        "absorbing_states": sum(states.absorbing),
        "minimal_count": len(minimal),
        "detailed_balance_violation": check_detailed_balance(tm, epsilon),
        "stationary_max_rel_err": rel,
    }
