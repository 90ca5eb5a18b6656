"""Exception types. Each carries a short machine-readable ``code``."""


class BetaflowError(Exception):
    code = "ERROR"

    def __init__(self, message="", **details):
        super().__init__(message or self.code)
        self.details = details


class UndecidableAtPrecision(BetaflowError):
    code = "UNDECIDABLE-AT-PRECISION"


class NoPeriodWithinBudget(BetaflowError):
    code = "NO-PERIOD-WITHIN-BUDGET"


class NoRoot(BetaflowError):
    code = "NO-ROOT"


class NotAdmissible(BetaflowError):
    code = "NOT-ADMISSIBLE"


class RoundtripMismatch(BetaflowError):
    code = "ROUNDTRIP-MISMATCH"


class TargetOutOfRange(BetaflowError):
    code = "TARGET-OUT-OF-RANGE"


class InvalidParams(BetaflowError):
    code = "INVALID-PARAMS"


class NotSFT(BetaflowError):
    code = "NOT-SFT"


class MarkovViolation(BetaflowError):
    code = "MARKOV-VIOLATION"


class NotTransitive(BetaflowError):
    code = "NOT-TRANSITIVE"


class SearchExhausted(BetaflowError):
    code = "SEARCH-EXHAUSTED"


class EPlusSearchExhausted(BetaflowError):
    code = "E-PLUS-SEARCH-EXHAUSTED"


class MissingFixture(BetaflowError):
    code = "MISSING-FIXTURE"
