#!/usr/bin/env python3
"""
Exception hierarchy for causalabs.

Validation functions return violation lists; everything else raises one of
the classes below. The CLI maps them onto exit codes.
"""


class CausalAbstractionError(Exception):
    """Base class for every error raised by the package."""


class NumericsError(CausalAbstractionError):
    pass


class StochasticityError(NumericsError):
    """A matrix or vector is not (column-)stochastic."""

    def __init__(self, violations):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
        super().__init__('; '.join(self.violations))


class DimensionMismatchError(NumericsError, ValueError):
    pass


class InfiniteDivergenceError(NumericsError):
    pass


class EmptyPreimageError(NumericsError):
    pass


class ScmError(CausalAbstractionError):
    pass


class ScmValidationError(ScmError):
    """Raised when an operation needs a valid Scm and gets an invalid one."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__('invalid model: ' + '; '.join(self.violations))


class UnknownVariableError(ScmError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ''


class NullConditionError(ScmError):
    pass


class InvalidQueryError(ScmError, ValueError):
    """Query variables that are empty, repeated or overlap where they must not."""


class AbstractionError(CausalAbstractionError):
    pass


class AbstractionValidationError(AbstractionError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__('invalid abstraction: ' + '; '.join(self.violations))


class NoSurjectionError(AbstractionError):
    pass


class InvalidDiagramError(AbstractionError, ValueError):
    """Diagram sources or targets that are empty, repeated or not disjoint."""


class InvalidLambdaError(CausalAbstractionError, ValueError):
    pass


class ModelFormatError(CausalAbstractionError):
    """A document could not be parsed or does not match its schema.

    Args:
        message: Description of the problem
        line: 1-based line of a parse error, if known
        column: 1-based column of a parse error, if known
    """

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f'line {line} column {column}: {message}'
        super().__init__(message)

    @property
    def is_parse_error(self):
        return self.line is not None


class ProblemError(CausalAbstractionError):
    pass


class ConfigError(CausalAbstractionError):
    pass
