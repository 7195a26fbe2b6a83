"""Exception types shared across the package."""


class VerificationFailure(Exception):
    """A requested check came back false (CLI exit code 2)."""


class InternalInvariantError(Exception):
    """A condition the implementation guarantees was observed to fail.

    Raised, for example, if the jump chain finds no feasible move or a
    chain state leaves the reachable region.  Maps to CLI exit code 3.
    """


class ChainStuckError(InternalInvariantError):
    """The self-loop-free chain found no feasible move (must not happen)."""
