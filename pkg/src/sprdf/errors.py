"""Exception hierarchy shared by every module of the package."""


class SprdfError(Exception):
    """Base class for all errors raised by sprdf."""


class MalformedTerm(SprdfError, ValueError):
    pass


class LiteralSubject(SprdfError, ValueError):
    pass


class NonIriPredicate(SprdfError, ValueError):
    pass


class UnknownTermId(SprdfError, KeyError):
    pass


class MintCollision(SprdfError):
    pass


class NotASingleton(SprdfError):
    pass


class AmbiguousSingleton(SprdfError):
    pass


class ResourceLimit(SprdfError):
    """Materialization exceeded the configured round or triple ceiling."""

    def __init__(self, message, rounds=0, triple_count=0):
        super().__init__(message)
        self.rounds = rounds
        self.triple_count = triple_count


class NotInferred(SprdfError):
    pass


class QuerySyntaxError(SprdfError):
    """Raised by the query parser; carries a 1-based line and column."""

    def __init__(self, message, line=1, column=1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.msg = message
        self.line = line
        self.column = column


class UnknownPrefix(QuerySyntaxError):
    pass


class QueryTimeout(SprdfError):
    pass


class ConfigError(SprdfError, ValueError):
    pass
