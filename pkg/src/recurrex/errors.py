"""Exception taxonomy shared across the package."""


class RecurrexError(Exception):
    """Base class for all library errors."""


class FormatError(RecurrexError):
    """Input file has an unsupported encoding (e.g. float WAV)."""


class ParseError(RecurrexError):
    """Input file is corrupt or truncated."""


class EmptyInputError(RecurrexError):
    """Signal too short for the requested operation."""


class ParameterError(RecurrexError):
    """Operation parameters violate a documented precondition."""


class DegenerateFrameError(RecurrexError):
    """Frame has zero amplitude range; embedding estimators are undefined."""


class DegenerateDistancesError(RecurrexError):
    """All pairwise distances are equal; a quantile threshold is undefined."""


class DegenerateLabelsError(RecurrexError):
    """Classifier training needs at least two distinct labels."""


class GroupingError(RecurrexError):
    """A normalization statistic group is empty."""


class ProtocolError(RecurrexError):
    """Evaluation protocol preconditions are not met."""


class JoinError(RecurrexError):
    """Rows of two tables could not be joined on their shared key."""
