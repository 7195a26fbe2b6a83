"""Simple undirected graphs: construction, generators, and edge-list files.

Nodes are dense integer ids 0..n-1 so that hot loops can index arrays
directly.  Graphs are immutable after construction and safe to share
across concurrent runs.
"""

from __future__ import annotations

import hashlib
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Graph",
    "gen_clique",
    "gen_path",
    "gen_cycle",
    "gen_star",
    "gen_double_star",
    "gen_erdos_renyi",
    "gen_random_tree",
    "audit",
    "read_edge_list",
    "write_edge_list",
    "graph_from_spec",
]


class Graph:
    """Immutable simple undirected graph over nodes 0..n-1.

    Attributes:
        n: node count.
        m: edge count.
        adjacency: tuple of per-node sorted neighbor tuples.
        degrees: tuple of node degrees.
    """

    __slots__ = ("n", "m", "adjacency", "degrees")

    def __init__(self, n: int, adjacency: Sequence[Sequence[int]]):
        # Trusted constructor; build through from_edge_list for validation.
        self.n = n
        self.adjacency = tuple(tuple(nbrs) for nbrs in adjacency)
        self.degrees = tuple(len(nbrs) for nbrs in self.adjacency)
        self.m = sum(self.degrees) // 2

    @classmethod
    def from_edge_list(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        """Build a graph from unordered node pairs.

        Duplicate pairs collapse to a single edge.  Raises ValueError on
        n <= 0, out-of-range ids, or self-loop pairs.
        """
        if n <= 0:
            raise ValueError(f"node count must be positive, got {n}")
        seen: set[tuple[int, int]] = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop ({u},{v}) not allowed")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for n={n}")
            seen.add((u, v) if u < v else (v, u))
        adjacency: list[list[int]] = [[] for _ in range(n)]
        for u, v in sorted(seen):
            adjacency[u].append(v)
            adjacency[v].append(u)
        return cls(n, [sorted(nbrs) for nbrs in adjacency])

    def edges(self) -> list[tuple[int, int]]:
        """All edges as (u, v) with u < v, sorted lexicographically."""
        out = []
        for u, nbrs in enumerate(self.adjacency):
            for v in nbrs:
                if u < v:
                    out.append((u, v))
        return out

    def digest(self) -> str:
        """Short stable fingerprint of the edge set (provenance in records)."""
        h = hashlib.sha256()
        h.update(f"{self.n} {self.m}\n".encode())
        for u, v in self.edges():
            h.update(f"{u} {v}\n".encode())
        return h.hexdigest()[:12]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.adjacency == other.adjacency

    def __hash__(self) -> int:
        return hash((self.n, self.adjacency))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def audit(g: Graph) -> None:
    """Check structural invariants; raises ValueError on any violation.

    Used by generator tests as an independent sanity gate: no self-loops,
    symmetric sorted duplicate-free adjacency, consistent edge count.
    """
    if g.n <= 0:
        raise ValueError("empty graph")
    if len(g.adjacency) != g.n:
        raise ValueError("adjacency length mismatch")
    total = 0
    for i, nbrs in enumerate(g.adjacency):
        if list(nbrs) != sorted(set(nbrs)):
            raise ValueError(f"adjacency[{i}] not sorted or has duplicates")
        for j in nbrs:
            if j == i:
                raise ValueError(f"self-loop at {i}")
            if not 0 <= j < g.n:
                raise ValueError(f"neighbor {j} of {i} out of range")
            if i not in g.adjacency[j]:
                raise ValueError(f"asymmetric edge ({i},{j})")
        total += len(nbrs)
    if g.m != total // 2:
        raise ValueError("edge count does not match adjacency")


# ---------------------------------------------------------------------------
# Generators.  All are deterministic given their arguments (and seed).
# ---------------------------------------------------------------------------


def gen_clique(k: int) -> Graph:
    """Complete graph on k >= 2 nodes."""
    if k < 2:
        raise ValueError(f"clique needs k >= 2, got {k}")
    return Graph.from_edge_list(k, [(i, j) for i in range(k) for j in range(i + 1, k)])


def gen_path(n: int) -> Graph:
    """Path 0-1-...-(n-1); a single node for n=1."""
    if n < 1:
        raise ValueError(f"path needs n >= 1, got {n}")
    return Graph.from_edge_list(n, [(i, i + 1) for i in range(n - 1)])


def gen_cycle(n: int) -> Graph:
    """Cycle on n >= 3 nodes."""
    if n < 3:
        raise ValueError(f"cycle needs n >= 3, got {n}")
    return Graph.from_edge_list(n, [(i, (i + 1) % n) for i in range(n)])


def gen_star(leaves: int) -> Graph:
    """Star with center 0 and the given number of leaves (>= 1)."""
    if leaves < 1:
        raise ValueError(f"star needs >= 1 leaf, got {leaves}")
    return Graph.from_edge_list(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def gen_double_star() -> Graph:
    """Fixed 8-node graph: two degree-4 hubs sharing two middle nodes.

    Layout: hubs 0 and 1; middles 2, 3 adjacent to both hubs; 4, 5 pendant
    on hub 0; 6, 7 pendant on hub 1.  Degree sequence {4,4,2,2,1,1,1,1}.
    """
    edges = [(0, 2), (0, 3), (0, 4), (0, 5), (1, 2), (1, 3), (1, 6), (1, 7)]
    return Graph.from_edge_list(8, edges)


def gen_erdos_renyi(n: int, p: float, seed: int) -> Graph:
    """G(n, p): each unordered pair is an edge independently with prob p."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be in [0, 1], got {p}")
    rng = np.random.default_rng(seed)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    draws = rng.random(len(pairs))
    return Graph.from_edge_list(n, [pair for pair, u in zip(pairs, draws) if u < p])


def gen_random_tree(n: int, seed: int) -> Graph:
    """Uniform random labeled tree on n nodes via a Pruefer sequence."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if n == 1:
        return Graph.from_edge_list(1, [])
    if n == 2:
        return Graph.from_edge_list(2, [(0, 1)])
    rng = np.random.default_rng(seed)
    seq = rng.integers(0, n, size=n - 2).tolist()
    count = [0] * n
    for x in seq:
        count[x] += 1
    edges = []
    # Classic decode: repeatedly attach the smallest leaf to the next code entry.
    import heapq

    leaves = [i for i in range(n) if count[i] == 0]
    heapq.heapify(leaves)
    for x in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, x))
        count[x] -= 1
        if count[x] == 0:
            heapq.heappush(leaves, x)
    u = heapq.heappop(leaves)
    v = heapq.heappop(leaves)
    edges.append((u, v))
    return Graph.from_edge_list(n, edges)


# ---------------------------------------------------------------------------
# Edge-list file format: first non-comment line "n m", then m lines "u v"
# with u < v, sorted; '#' starts a comment line.  Writer output round-trips
# bit-exactly through the reader.
# ---------------------------------------------------------------------------


def write_edge_list(g: Graph, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(f"{g.n} {g.m}\n")
        for u, v in g.edges():
            fh.write(f"{u} {v}\n")


def read_edge_list(path: str) -> Graph:
    header: tuple[int, int] | None = None
    edges: list[tuple[int, int]] = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected two integers, got {line!r}")
            a, b = int(parts[0]), int(parts[1])
            if header is None:
                header = (a, b)
            else:
                edges.append((a, b))
    if header is None:
        raise ValueError(f"{path}: no header line")
    n, m = header
    if len(edges) != m:
        raise ValueError(f"{path}: header says {m} edges, found {len(edges)}")
    return Graph.from_edge_list(n, edges)


# ---------------------------------------------------------------------------
# Generator spec strings used by the CLI, e.g. "clique:5", "er:20:0.5:seed=7".
# ---------------------------------------------------------------------------

_FIXED_KINDS = {
    "clique": gen_clique,
    "path": gen_path,
    "cycle": gen_cycle,
    "star": gen_star,
}


def graph_from_spec(spec: str, default_seed: int | None = None) -> tuple[Graph, int | None]:
    """Parse a generator spec string.

    Forms: "clique:K", "path:N", "cycle:N", "star:LEAVES", "doublestar",
    "er:N:P[:seed=S]", "tree:N[:seed=S]".  Returns (graph, seed used),
    where seed is None for deterministic families.
    """
    parts = spec.split(":")
    kind = parts[0].lower()
    args = parts[1:]
    seed = default_seed
    if args and args[-1].startswith("seed="):
        seed = int(args[-1][5:])
        args = args[:-1]
    try:
        if kind == "doublestar":
            if args:
                raise ValueError("doublestar takes no size arguments")
            return gen_double_star(), None
        if kind in _FIXED_KINDS:
            (size,) = args
            return _FIXED_KINDS[kind](int(size)), None
        if kind == "er":
            n, p = int(args[0]), float(args[1])
            if len(args) > 2:
                raise ValueError(f"unexpected arguments in {spec!r}")
            if seed is None:
                raise ValueError(f"{spec!r} needs a seed (append :seed=S or pass --seed)")
            return gen_erdos_renyi(n, p, seed), seed
        if kind == "tree":
            (n,) = args
            if seed is None:
                raise ValueError(f"{spec!r} needs a seed (append :seed=S or pass --seed)")
            return gen_random_tree(int(n), seed), seed
    except (IndexError, ValueError) as exc:
        if isinstance(exc, ValueError) and exc.args and "seed" in str(exc):
            raise
        raise ValueError(f"bad graph spec {spec!r}: {exc}") from exc
    raise ValueError(f"unknown graph kind {kind!r}")
