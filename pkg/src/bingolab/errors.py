"""Exception hierarchy shared by all bingolab modules."""


class BingoError(Exception):
    """Base class for all bingolab errors."""


class ValidationError(BingoError, ValueError):
    """Inputs violate a contract: bad game parameters, malformed cards,
    out-of-range probabilities, inconsistent card specs."""


class CapacityError(BingoError):
    """The requested exact computation exceeds the configured size limit
    (too many unique lines to enumerate, pool too large to brute-force)."""
