"""Exception hierarchy shared by all ibpcheck modules."""


class IbpcheckError(Exception):
    """Base class for every error raised by this package."""


# -- graph layer -------------------------------------------------------------

class InvalidNetwork(IbpcheckError):
    """A multigraph violates a structural invariant (loops, bad ids, ...)."""


class EdgeNotFound(IbpcheckError, KeyError):
    """An operation referenced an edge id that is not in the graph."""


class NoPath(IbpcheckError):
    """No simple path exists between the requested terminals."""


class PathCapExceeded(IbpcheckError):
    """Simple-path enumeration hit the configured cap.

    Enumeration is exhaustive and worst-case exponential; the cap turns a
    runaway instance into an explicit error instead of a hang.
    """

    def __init__(self, cap: int):
        super().__init__(f"more than {cap} simple paths; raise max_paths to proceed")
        self.cap = cap


class TerminalMergeForbidden(IbpcheckError):
    """A contraction would merge the two terminals of one OD pair."""


class GraphOperationError(IbpcheckError):
    """An edge deletion/contraction cannot be applied to this graph."""


# -- topology layer ----------------------------------------------------------

class NotSingleOd(IbpcheckError):
    """A claimed single-OD network has edges on no terminal-to-terminal path."""


class PreconditionNotSli(IbpcheckError):
    """Common-block classification requires both OD subnetworks to be SLI."""


# -- equilibrium layer -------------------------------------------------------

class SolverError(IbpcheckError):
    """Base class for equilibrium-solver failures."""


class NoFeasiblePath(SolverError):
    """A traveler type with positive rate has no path inside its info set."""


class DidNotConverge(SolverError):
    """The iterative solver exceeded max_iterations above tolerance."""

    def __init__(self, iterations: int, violation: float):
        super().__init__(
            f"no equilibrium after {iterations} iterations "
            f"(wardrop violation {violation:.3e})"
        )
        self.iterations = iterations
        self.violation = violation


class BackendUnavailable(SolverError):
    """The requested solver backend cannot handle this game."""


# -- paradox layer -----------------------------------------------------------

class IsCycleError(IbpcheckError):
    """The block is a cycle, hence immune; no gadget embedding exists."""


class PreconditionViolated(IbpcheckError):
    """An operation's stated precondition does not hold for the input."""


class StepsDoNotReproduceSource(IbpcheckError):
    """Replaying the step list did not yield the source instance's graph."""


class UnsupportedFailureSite(IbpcheckError):
    """Witness synthesis only handles non-cycle non-coincident common blocks."""


class NotACycle(IbpcheckError):
    """Cycle diagnostics were asked about a non-cycle network."""


class NotNormalForm(IbpcheckError):
    """Cycle diagnostics require one traveler type per OD pair."""


class WitnessVerificationFailed(IbpcheckError):
    """A constructed witness failed its own paradox check (internal bug)."""


# -- instance files ----------------------------------------------------------

class InstanceFileError(IbpcheckError):
    """An instance file is malformed; message names the offending field."""
