"""Exception hierarchy shared by all modules."""


class SharpEmbedError(Exception):
    pass


class DomainError(SharpEmbedError, ValueError):
    """An argument lies outside the region where the quantity is defined."""


class DegenerateOvalError(DomainError):
    """alpha reached alpha*(q): the two roots merge at ``witness``."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class SingularityError(DomainError):
    pass


class NonConvergenceError(SharpEmbedError, RuntimeError):
    pass


class ConsistencyError(SharpEmbedError, RuntimeError):
    pass


class InconclusiveError(SharpEmbedError, RuntimeError):
    pass
