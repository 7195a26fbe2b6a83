"""Shared fixtures and the acceptance-criteria reporting hook."""

from controlsets import (
    Graph,
    gen_clique,
    gen_cycle,
    gen_double_star,
    gen_path,
    gen_star,
)


def _two_paths() -> Graph:
    return Graph.from_edge_list(6, [(0, 1), (1, 2), (3, 4), (4, 5)])


# Small named graphs reused across test modules. Keys are stable; several
# tests pin exact state counts for these, so do not reorder or redefine.
FIXTURES = {
    "k3": gen_clique(3),
    "k5": gen_clique(5),
    "p2": gen_path(2),
    "p3": gen_path(3),
    "p4": gen_path(4),
    "p5": gen_path(5),
    "c5": gen_cycle(5),
    "star3": gen_star(3),
    "twopath6": _two_paths(),
    "doublestar": gen_double_star(),
}


_CRITERION_LINES: list[str] = []


def record_criterion(number: int, title: str, ok: bool, detail: str = "") -> None:
    """Record one acceptance-criterion outcome and assert it.

    Every acceptance test funnels its verdict through here so the terminal
    summary shows one line per criterion regardless of how pytest groups
    the output.
    """
    status = "PASS" if ok else "FAIL"
    line = f"criterion {number:02d} [{status}] {title}"
    if detail:
        line += f" :: {detail}"
    _CRITERION_LINES.append(line)
    print(line)
    assert ok, line


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _CRITERION_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(_CRITERION_LINES):
        terminalreporter.write_line(line)
