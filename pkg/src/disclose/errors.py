"""Exception types shared across the package."""


class DiscloseError(Exception):
    """Base class for all errors raised by this package."""


class InvalidAdjacency(DiscloseError):
    """Adjacency list is unsorted, has duplicates, or points outside the target range."""


class MissingLabel(DiscloseError):
    """Target label vector is absent, wrong length, or contains values outside {+1, -1}."""


class BadGroupId(DiscloseError):
    """Group assignment is wrong length or contains an invalid group id."""


class IndexOutOfRange(DiscloseError, IndexError):
    """Agent or target index outside the graph's dense index range."""


class AlreadyRevealed(DiscloseError):
    """Target is already a member of the revealed set."""


class BudgetNegative(DiscloseError):
    """A reveal/intervention budget must be >= 0."""


class DepthOutOfRange(DiscloseError):
    """Lookahead depth must satisfy 1 <= d <= K."""


class SearchSpaceTooLarge(DiscloseError):
    """Subset enumeration would exceed the desk-scale guard."""


class NoGroups(DiscloseError):
    """Operation requires a graph with group assignments."""


class BudgetBelowGroupCount(DiscloseError):
    """Per-group budget split requires K >= number of groups."""


class ExactArithmeticRequired(DiscloseError):
    """Operation relies on exact rational ties and refuses the float backend."""


class EmptyAfterFiltering(DiscloseError):
    """Dataset preparation left one side of the split empty."""


class DimensionMismatch(DiscloseError):
    """Feature matrices disagree on dimensionality."""


class BadParams(DiscloseError):
    """Fixture family parameters outside their documented range."""


class TooFewAgents(DiscloseError):
    """Train/test split would leave a side without agents."""


class ZeroDenominator(DiscloseError):
    """Performance metric has no qualifying agents in its denominator."""


class ConfigError(DiscloseError):
    """Invalid CLI configuration (unknown keys, bad flag values). Exit code 2."""


class DataError(DiscloseError):
    """Unreadable or malformed input data. Exit code 3."""
