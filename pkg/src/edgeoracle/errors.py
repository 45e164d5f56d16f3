"""Exception types."""


class EdgeOracleError(Exception):
    """Base class for all package errors."""


class InvalidVertex(EdgeOracleError, ValueError):
    pass


class SelfLoop(EdgeOracleError, ValueError):
    pass


class SetsNotDisjoint(EdgeOracleError, ValueError):
    pass


class VertexInQuerySet(EdgeOracleError, ValueError):
    pass


class InvalidPartCount(EdgeOracleError, ValueError):
    pass


class InvalidGeneratorParams(EdgeOracleError, ValueError):
    pass


class InvalidParams(EdgeOracleError, ValueError):
    pass


class NotIndependent(EdgeOracleError, ValueError):
    """A set promised to be independent spans an edge."""


class BudgetExceeded(EdgeOracleError):
    """Raised before answering a query that would pass the session cap."""

    def __init__(self, kind: str, cap: int):
        super().__init__(f"{kind} query budget of {cap} exhausted")
        self.kind = kind
        self.cap = cap


class IngestError(EdgeOracleError):
    pass


class ConfigError(EdgeOracleError, ValueError):
    pass
