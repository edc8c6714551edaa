"""Exception hierarchy shared by the library and the command line front end."""


class SeifertError(Exception):
    """Base class for every error raised by seifert_calc."""


class DimensionMismatch(SeifertError, ValueError):
    """Vectors, matrices or group elements of incompatible shape were combined."""


class InvalidChart(SeifertError, ValueError):
    """A cyclic quotient chart violates gcd(a_1, ..., a_n, M) = 1."""


class InvalidLocalData(SeifertError, ValueError):
    """Local Seifert data that does not come from any cyclic quotient chart."""


class HypothesisNotMet(SeifertError):
    """A criterion was applied outside the hypotheses under which it holds."""


class StructuralError(SeifertError, ValueError):
    """Input objects are inconsistent with each other (wrong group, bad index)."""


class ValidationRequired(SeifertError):
    """The operation needs Seifert data that passes ``validate``."""


class PreconditionFailed(SeifertError):
    """A mathematical precondition of the operation does not hold."""


class AmbiguityPossible(SeifertError):
    """Uniqueness is not guaranteed, so no answer is returned."""


class Undecidable(SeifertError):
    """The declared data is not enough to decide the question."""
