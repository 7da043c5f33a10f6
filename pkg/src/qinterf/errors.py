"""Exception hierarchy.

Two families matter to callers: :class:`ValidationError` for inputs that
violate a contract (the CLI maps these to exit code 3) and
:class:`NumericError` for decompositions that fail on valid input (exit 4).
"""


class QinterfError(Exception):
    """Base class for all package errors."""


class ValidationError(QinterfError, ValueError):
    """Input does not satisfy an operation's preconditions."""


class NumericError(QinterfError, ArithmeticError):
    """A numerical routine failed on otherwise valid input."""


class NotSquare(ValidationError):
    pass


class NotHermitian(ValidationError):
    pass


class NonFinite(ValidationError):
    pass


class NotPsd(ValidationError):
    pass


class NotUnitary(ValidationError):
    pass


class NotIsometry(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class NotTracePreserving(ValidationError):
    def __init__(self, residual: float, tol: float):
        self.residual = residual
        super().__init__(
            f"Kraus completeness residual ||sum K^dag K - I|| = {residual:.3e} exceeds {tol:.0e}"
        )


class NotTracePreservingImage(ValidationError):
    pass


class TooManyOperators(ValidationError):
    pass


class BadArity(ValidationError):
    pass


class BadSampleCount(ValidationError):
    pass


class TooFewSamples(ValidationError):
    pass


class NonUniformGrid(ValidationError):
    pass


class ParseError(ValidationError):
    """Malformed channel or state file text."""


class SchemaError(ValidationError):
    """Well-formed text that does not match the expected file layout."""
