"""Majority and minority game primitives on a graph.

Each node plays 0 or 1.  In the majority game a node's utility is the
number of neighbors it agrees with; in the minority game, the number it
disagrees with.  The count of monochromatic edges is an exact potential
for the majority game: any unilateral flip changes it by exactly the
flipping node's utility change, so all comparisons stay in integers.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator

from .graph import Graph

__all__ = [
    "Configuration",
    "NeighborCount",
    "BestResponse",
    "all_zeros",
    "all_ones",
    "from_support",
    "neighbor_counts",
    "utility_majority",
    "utility_minority",
    "potential_majority",
    "potential_minority",
    "best_response",
    "is_nash_majority",
    "is_nash_minority",
    "enumerate_nash_minority",
    "potential_delta_check",
]

NASH_ENUMERATION_MAX_N = 24


@dataclass(frozen=True)
class Configuration:
    """An action profile: bits[i] is node i's current action (0 or 1)."""

    bits: tuple[int, ...]

    def __post_init__(self):
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("configuration bits must be 0 or 1")

    @property
    def n(self) -> int:
        return len(self.bits)

    def weight(self) -> int:
        """Number of nodes playing 1."""
        return sum(self.bits)

    def support(self) -> frozenset[int]:
        """Set of nodes playing 1."""
        return frozenset(i for i, b in enumerate(self.bits) if b)

    def flip(self, i: int) -> "Configuration":
        bits = list(self.bits)
        bits[i] ^= 1
        return Configuration(tuple(bits))

    def with_bit(self, i: int, value: int) -> "Configuration":
        if value not in (0, 1):
            raise ValueError(f"action must be 0 or 1, got {value}")
        if self.bits[i] == value:
            return self
        return self.flip(i)

    def to_mask(self) -> int:
        """Pack into an int, node i at bit position i (small graphs only)."""
        mask = 0
        for i, b in enumerate(self.bits):
            mask |= b << i
        return mask

    @classmethod
    def from_mask(cls, mask: int, n: int) -> "Configuration":
        return cls(tuple((mask >> i) & 1 for i in range(n)))

    def to_string(self) -> str:
        """Serialize as a 0/1 string, node 0 first (e.g. "01101")."""
        return "".join(str(b) for b in self.bits)

    @classmethod
    def from_string(cls, s: str) -> "Configuration":
        if not s or any(ch not in "01" for ch in s):
            raise ValueError(f"configuration string must be nonempty 0/1, got {s!r}")
        return cls(tuple(int(ch) for ch in s))

    def __str__(self) -> str:
        return self.to_string()


def all_zeros(n: int) -> Configuration:
    return Configuration((0,) * n)


def all_ones(n: int) -> Configuration:
    return Configuration((1,) * n)


def from_support(n: int, support: Iterable[int]) -> Configuration:
    """Configuration with exactly the given nodes playing 1."""
    bits = [0] * n
    for i in support:
        if not 0 <= i < n:
            raise ValueError(f"node {i} out of range for n={n}")
        bits[i] = 1
    return Configuration(tuple(bits))


@dataclass(frozen=True)
class NeighborCount:
    """How a node's neighborhood splits between the two actions.

    Attributes:
        n0: neighbors currently playing 0.
        n1: neighbors currently playing 1.

    Always n0 + n1 = degree, so an isolated node reports (0, 0).
    """

    n0: int
    n1: int


class BestResponse(enum.Enum):
    """A node's set of utility-maximizing actions: one action or both."""

    ONLY0 = "only0"
    ONLY1 = "only1"
    BOTH = "both"

    def allows(self, action: int) -> bool:
        if self is BestResponse.BOTH:
            return True
        return action == (1 if self is BestResponse.ONLY1 else 0)

    def actions(self) -> tuple[int, ...]:
        if self is BestResponse.ONLY0:
            return (0,)
        if self is BestResponse.ONLY1:
            return (1,)
        return (0, 1)


def _check_lengths(g: Graph, x: Configuration) -> None:
    if x.n != g.n:
        raise ValueError(f"configuration length {x.n} does not match graph n={g.n}")


def neighbor_counts(g: Graph, x: Configuration, i: int) -> NeighborCount:
    """Split node i's neighborhood by current action."""
    _check_lengths(g, x)
    if not 0 <= i < g.n:
        raise IndexError(f"node {i} out of range for n={g.n}")
    ones = 0
    for j in g.adjacency[i]:
        ones += x.bits[j]
    return NeighborCount(n0=g.degrees[i] - ones, n1=ones)


def utility_majority(g: Graph, x: Configuration, i: int) -> int:
    """Number of neighbors agreeing with node i's current action."""
    c = neighbor_counts(g, x, i)
    return c.n1 if x.bits[i] == 1 else c.n0


def utility_minority(g: Graph, x: Configuration, i: int) -> int:
    """Number of neighbors disagreeing with node i's current action."""
    return g.degrees[i] - utility_majority(g, x, i)


def potential_majority(g: Graph, x: Configuration) -> int:
    """Count of monochromatic edges under x (between 0 and m).

    This is an exact potential for the majority game; unilateral
    improvement paths cannot cycle because each strict improvement
    raises this integer.
    """
    _check_lengths(g, x)
    bits = x.bits
    total = 0
    for u, nbrs in enumerate(g.adjacency):
        bu = bits[u]
        for v in nbrs:
            if u < v and bu == bits[v]:
                total += 1
    return total


def potential_minority(g: Graph, x: Configuration) -> int:
    """Exact potential for the minority game: the negated majority potential."""
    return -potential_majority(g, x)


def best_response(g: Graph, x: Configuration, i: int) -> BestResponse:
    """Node i's best-response set against the rest of x.

    Majority rule on (n0, n1): strictly more 1-neighbors means only 1,
    strictly more 0-neighbors means only 0, a tie admits both.  Isolated
    nodes are always tied.
    """
    c = neighbor_counts(g, x, i)
    if c.n1 > c.n0:
        return BestResponse.ONLY1
    if c.n0 > c.n1:
        return BestResponse.ONLY0
    return BestResponse.BOTH


def _minority_best_response(g: Graph, x: Configuration, i: int) -> BestResponse:
    c = neighbor_counts(g, x, i)
    if c.n1 < c.n0:
        return BestResponse.ONLY1
    if c.n0 < c.n1:
        return BestResponse.ONLY0
    return BestResponse.BOTH


def is_nash_majority(g: Graph, x: Configuration) -> bool:
    """True when every node's action is a majority best response."""
    return all(best_response(g, x, i).allows(x.bits[i]) for i in range(g.n))


def is_nash_minority(g: Graph, x: Configuration) -> bool:
    """True when every node's action is a minority best response."""
    return all(_minority_best_response(g, x, i).allows(x.bits[i]) for i in range(g.n))


def _configurations_lex(n: int) -> Iterator[Configuration]:
    for bits in itertools.product((0, 1), repeat=n):
        yield Configuration(bits)


def enumerate_nash_minority(g: Graph) -> list[Configuration]:
    """All minority-game Nash profiles, in lexicographic bit order.

    Exhaustive over 2^n profiles, so n is capped at 24.  The output is
    closed under the global bit flip x -> complement(x) because the
    minority utilities are invariant under relabeling the two actions.
    """
    if g.n > NASH_ENUMERATION_MAX_N:
        raise ValueError(
            f"exhaustive Nash enumeration capped at n <= {NASH_ENUMERATION_MAX_N}, got n={g.n}"
        )
    return [x for x in _configurations_lex(g.n) if is_nash_minority(g, x)]


def potential_delta_check(g: Graph, x: Configuration, i: int, action: int) -> bool:
    """Check the potential identity on one instance.

    Replacing node i's action must change the monochromatic edge count
    by exactly node i's utility change.  Always true; exists so tests
    can assert the identity over random instances.
    """
    y = x.with_bit(i, action)
    lhs = potential_majority(g, y) - potential_majority(g, x)
    rhs = utility_majority(g, y, i) - utility_majority(g, x, i)
    return lhs == rhs
