"""Exception hierarchy shared by every stage of the analyzer.

Each error carries a short machine-readable ``code`` used by the CLI.
"""


class PPError(Exception):
    code = "internal"


class ParseError(PPError):
    """Malformed equation text; ``line``/``column`` are 1-based."""

    code = "syntax"

    def __init__(self, message, line=1, column=1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.message = message
        self.line = line
        self.column = column


class NonPolynomial(ParseError):
    code = "non-polynomial"


class ValidationError(PPError):
    code = "invalid"


class MissingVariable(ValidationError):
    code = "missing-variable"


class Reducible(ValidationError):
    code = "reducible"

    def __init__(self, message, factors=()):
        super().__init__(message)
        self.factors = list(factors)


class IrreducibilityUnknown(ValidationError):
    code = "irreducibility-unknown"


class ConstantEquation(MissingVariable):
    """The input is ``y' = 0``; handled outside the pole analysis."""

    code = "constant-equation"


class UnsupportedExtension(PPError):
    code = "unsupported-extension"

    def __init__(self, message, minpoly=None):
        super().__init__(message)
        self.minpoly = minpoly


class TruncationTooSmall(PPError):
    code = "truncation"


class DivisionByZeroSeries(PPError, ZeroDivisionError):
    code = "division-by-zero"


class LeadingTermVanishes(PPError):
    code = "leading-term-vanishes"


class BadBasePoint(PPError):
    code = "bad-base-point"
