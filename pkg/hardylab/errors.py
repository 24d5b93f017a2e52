"""Exception types for hardylab.

Numerical routines raise these instead of returning NaN, so that a bad
configuration is caught where it is made and the CLI can map it to an
exit status.
"""


class HardyLabError(Exception):
    """Base class for all hardylab errors."""


class DomainError(HardyLabError, ValueError):
    """An argument lies outside the domain of a curvature function or model."""


class SpaceMismatchError(HardyLabError, ValueError):
    """Points from two different model spaces were combined."""


class HypothesisError(HardyLabError):
    """A hypothesis of an inequality or existence result is violated.

    Attributes:
        hypothesis: Short name of the violated hypothesis, e.g.
            'comparison hypothesis K >= k0'.
    """

    def __init__(self, message, hypothesis):
        super().__init__(message)
        self.hypothesis = hypothesis

    def __str__(self):
        return f'{self.args[0]} (violated hypothesis: {self.hypothesis})'


class ResolutionError(HardyLabError):
    """A quadrature grid is too coarse for the requested accuracy."""


class SpecError(HardyLabError):
    """An experiment spec file cannot be parsed or is inconsistent.

    Attributes:
        line: 1-based line number in the spec file, or None when the
            problem is not tied to a single line.
    """

    def __init__(self, message, line=None):
        super().__init__(message)
        self.line = line

    def __str__(self):
        if self.line is None:
            return self.args[0]
        return f'line {self.line}: {self.args[0]}'
