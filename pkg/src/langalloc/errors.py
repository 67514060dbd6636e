"""Exception hierarchy shared by all modules.

Exit-code mapping for the CLI: input errors -> 1, constraint/degenerate
errors -> 2, I/O failures -> 3.
"""


class LangAllocError(Exception):
    exit_code = 1


class InputError(LangAllocError):
    """Malformed or inconsistent caller input."""
    exit_code = 1


class AlignmentError(InputError):
    """Parallel corpora or embedding sets disagree in shape or row count."""


class InsufficientDataError(InputError):
    """Too few sentences to compute a misaligned-pair mean."""


class AvailabilityMismatchError(InputError):
    """A dataset index holds fewer examples than the allocation requires."""


class CoverageError(InputError):
    """A result set is missing a strategy required for a paired analysis."""


class ConstraintError(LangAllocError):
    """A well-formed input violates a mathematical precondition."""
    exit_code = 2


class DegenerateWeightsError(ConstraintError):
    """All similarity weights are zero; no informed selection is possible."""


class DegenerateVarianceError(ConstraintError):
    """Paired differences have zero variance; t statistic undefined."""


class ScaleError(ConstraintError):
    """Brute-force grid exceeds the enumerable size limit."""


class IOFailure(LangAllocError):
    exit_code = 3
