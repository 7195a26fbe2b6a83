"""Contagion closure and the validity machinery for control sets.

A control set is a collection of nodes pinned to action 1.  Pinning it
and letting every other node flip to 1 whenever at least half of its
neighbors already play 1 grows the set to a unique fixpoint, the
closure.  The set is valid exactly when the closure is the whole node
set, and validity in turn is equivalent to the pinned dynamics reaching
all-ones almost surely, which is what makes this module the fast
decision procedure for everything else in the package.

Closure runs in O(n + sum of degrees) with per-node counters and a
worklist.  The service order of the worklist does not affect the
result (tests randomize it); it does affect the reported activation
order, which is why the default is deterministic FIFO.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Optional, Sequence

from .game import Configuration, neighbor_counts
from .graph import Graph

__all__ = [
    "normalize_control_set",
    "activatable",
    "closure",
    "activation_order",
    "verify_activation_order",
    "is_valid",
    "is_minimal",
    "trim_to_minimal",
    "is_reachable_state",
    "is_absorbing_state",
]


def normalize_control_set(g: Graph, members: Iterable[int]) -> tuple[int, ...]:
    """Validate and canonicalize a control set: sorted, deduped, in range."""
    out = sorted(set(int(i) for i in members))
    for i in out:
        if not 0 <= i < g.n:
            raise ValueError(f"control-set node {i} out of range for n={g.n}")
    return tuple(out)


def activatable(g: Graph, x: Configuration, i: int) -> bool:
    """True iff node i has at least as many 1-neighbors as 0-neighbors.

    This is the single threshold the whole package turns on: a 0-node
    may rise (the flip does not lower the count of agreeing edges) and
    a 1-node may drop (the flip does not raise it) exactly when this
    holds.  Isolated nodes are always activatable (0 >= 0).
    """
    c = neighbor_counts(g, x, i)
    return c.n1 >= c.n0


def _run_closure(
    g: Graph,
    seed: tuple[int, ...],
    service_rng=None,
) -> tuple[set[int], list[int]]:
    """Worklist fixpoint. Returns (closed set, activation order).

    service_rng, when given, picks which pending node to examine next
    (any numpy Generator); default is FIFO.  The fixpoint itself is
    order-independent because activation is monotone in the current
    set: once a node qualifies it stays qualified.
    """
    inside = [False] * g.n
    ones = [0] * g.n  # neighbors currently inside, per node
    for i in seed:
        inside[i] = True
    for i in seed:
        for j in g.adjacency[i]:
            ones[j] += 1

    pending: deque[int] | list[int]
    outside = [i for i in range(g.n) if not inside[i]]
    queued = [False] * g.n
    if service_rng is None:
        pending = deque(outside)
    else:
        pending = list(outside)
    for i in outside:
        queued[i] = True

    order: list[int] = []
    while pending:
        if service_rng is None:
            i = pending.popleft()  # type: ignore[union-attr]
        else:
            k = int(service_rng.integers(0, len(pending)))
            pending[k], pending[-1] = pending[-1], pending[k]
            i = pending.pop()
        queued[i] = False
        if inside[i]:
            continue
        if ones[i] * 2 < g.degrees[i]:  # n1 < n0, cannot rise yet
            continue
        inside[i] = True
        order.append(i)
        for j in g.adjacency[i]:
            ones[j] += 1
            if not inside[j] and not queued[j]:
                pending.append(j)
                queued[j] = True
    return {i for i in range(g.n) if inside[i]}, order


def closure(g: Graph, members: Iterable[int], service_rng=None) -> frozenset[int]:
    """Least superset of the given set with no activatable node outside it."""
    seed = normalize_control_set(g, members)
    closed, _ = _run_closure(g, seed, service_rng)
    return frozenset(closed)


def is_valid(g: Graph, members: Iterable[int]) -> bool:
    """True iff pinning the set to 1 drags the whole graph to all-ones.

    Decided by checking closure == all nodes, which is equivalent to
    the pinned random dynamics absorbing at all-ones with probability
    one from every admissible start.
    """
    return len(closure(g, members)) == g.n


def activation_order(
    g: Graph, members: Iterable[int], service_rng=None
) -> Optional[tuple[int, ...]]:
    """An order in which the uncontrolled nodes can rise one at a time.

    Returns the order produced by the closure worklist, or None when the
    set is not valid.  Replaying the order from the pinned configuration
    never decreases the count of agreeing edges (verifiable with
    verify_activation_order).
    """
    seed = normalize_control_set(g, members)
    closed, order = _run_closure(g, seed, service_rng)
    if len(closed) != g.n:
        return None
    return tuple(order)


def verify_activation_order(
    g: Graph, members: Iterable[int], order: Sequence[int]
) -> bool:
    """Replay a claimed activation order and check it independently.

    Structural defects (a repeated node, a node inside the control set,
    wrong coverage of the remaining nodes, an out-of-range id) raise
    ValueError.  A structurally sound order returns False iff some step
    would lower the count of agreeing edges, True otherwise.
    """
    seed = normalize_control_set(g, members)
    rest = set(range(g.n)) - set(seed)
    seen: set[int] = set()
    for i in order:
        if not 0 <= i < g.n:
            raise ValueError(f"order node {i} out of range for n={g.n}")
        if i in seed:
            raise ValueError(f"order node {i} is already in the control set")
        if i in seen:
            raise ValueError(f"order repeats node {i}")
        seen.add(i)
    if seen != rest:
        missing = sorted(rest - seen)
        raise ValueError(f"order must cover every uncontrolled node; missing {missing}")

    ones = [0] * g.n
    for i in seed:
        for j in g.adjacency[i]:
            ones[j] += 1
    for i in order:
        if ones[i] * 2 < g.degrees[i]:
            return False  # this flip would lose more agreement than it gains
        for j in g.adjacency[i]:
            ones[j] += 1
    return True


def is_minimal(g: Graph, members: Iterable[int]) -> bool:
    """Valid, and no single deletion stays valid.

    Checking one-element deletions suffices: validity only improves
    when a set grows, so any invalid deletion certifies that every
    subset below it is invalid too.
    """
    c = normalize_control_set(g, members)
    if not is_valid(g, c):
        return False
    return all(not is_valid(g, [j for j in c if j != i]) for i in c)


def trim_to_minimal(g: Graph, members: Iterable[int]) -> tuple[int, ...]:
    """Greedily shrink a valid set until it is minimal.

    Deletion is attempted in ascending node-id order, restarting from
    the smallest id after every successful removal, so the result is
    deterministic.  Other orders can produce different but equally
    minimal sets.  Raises ValueError when the input set is not valid.
    """
    current = list(normalize_control_set(g, members))
    if not is_valid(g, current):
        raise ValueError("trim_to_minimal requires a valid control set")
    shrunk = True
    while shrunk:
        shrunk = False
        for i in list(current):
            candidate = [j for j in current if j != i]
            if is_valid(g, candidate):
                current = candidate
                shrunk = True
                break
    return tuple(current)


def is_reachable_state(g: Graph, x: Configuration) -> bool:
    """Membership in the down-move reachable region.

    A configuration can be reached from all-ones through single drops
    at activatable nodes iff its support is a valid control set, so
    this simply delegates to the closure test.
    """
    return is_valid(g, x.support())


def is_absorbing_state(g: Graph, x: Configuration) -> bool:
    """Reachable, and no 1-node may drop (the zero-rate chain halts here)."""
    if not is_reachable_state(g, x):
        return False
    return not any(
        x.bits[i] == 1 and activatable(g, x, i) for i in range(g.n)
    )
