"""Exception types shared across the workbench.

The CLI maps these onto exit codes: invalid input is a usage error (exit 2),
numerical failure is an honest "the computation did not survive" (exit 3).
Infeasibility is *data*, not an error, but it is raised internally so that
synthesis routines cannot silently produce garbage protocols.
"""


class EntlabError(Exception):
    """Base class for all workbench errors."""


class InvalidInputError(EntlabError, ValueError):
    """Input violates a documented precondition (bad shape, bad value)."""


class InfeasibleError(EntlabError):
    """A requested transformation is not feasible (majorization fails)."""


class NoConnectorError(EntlabError):
    """Two purifications do not share an A-marginal; no connector exists."""


class NotReducibleError(EntlabError):
    """A protocol branch is not reducible to one-way form as specified."""


class NumericalFailureError(EntlabError):
    """A computation lost too much precision to be trusted (exit code 3)."""
