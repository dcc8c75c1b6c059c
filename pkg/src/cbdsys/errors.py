"""Exception hierarchy for cbdsys.

Data problems (bad files, impossible parameters, unsupported system shapes)
raise subclasses of :class:`CbdError`; genuine solver breakdowns raise
:class:`SolverError` so callers can tell "your input is contextual/unsupported"
apart from "the engine failed".
"""


class CbdError(Exception):
    """Base class for all cbdsys errors."""


class ParseError(CbdError):
    """A system file could not be read as a well-formed document."""


class ValidationError(CbdError):
    """A system violates its structural invariants.

    Carries the full list of violations so callers can report every problem
    at once instead of failing on the first.
    """

    def __init__(self, violations: list[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class ContentNotInContextError(CbdError):
    """A content id was requested from a bunch whose context does not hold it."""


class RankError(CbdError):
    """A closed-form criterion was applied to a layout of the wrong rank."""


class InconsistentSystemError(CbdError):
    """A criterion that presumes consistent connectedness got an inconsistent system."""


class ConnectionSizeError(CbdError):
    """A content appears in more than two contexts; pairwise coupling targets are undefined."""


class SystemSizeError(CbdError):
    """The system exceeds the variable budget of the requested engine."""


class MomentError(CbdError):
    """A (mean, mean, correlation) triple admits no 2x2 distribution."""


class ParameterError(CbdError):
    """Scenario parameters violate their admissibility constraints."""


class SolverError(CbdError):
    """The feasibility engine failed for reasons other than infeasibility."""
