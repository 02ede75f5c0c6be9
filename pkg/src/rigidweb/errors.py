"""Exception hierarchy.  The CLI maps these onto exit codes."""


class RigidwebError(Exception):
    """Base class for all package errors."""


class InputError(RigidwebError, ValueError):
    """Malformed input text or JSON (CLI exit code 2)."""


class ExprSyntaxError(InputError):
    def __init__(self, message, text="", pos=0):
        super().__init__(f"{message} at position {pos}" if text else message)
        self.text = text
        self.pos = pos


class SemanticError(RigidwebError, ValueError):
    """Well-formed input that violates a precondition (CLI exit code 3)."""


class DimensionMismatch(SemanticError):
    pass


class NotContained(SemanticError):
    pass


class NotDirectSum(SemanticError):
    pass


class VariableOutOfRange(SemanticError):
    pass


class DegeneracyError(SemanticError):
    """A projection or complement collapsed while building a reconstruction plan."""

    def __init__(self, message, k=None, l=None):
        super().__init__(message)
        self.k = k
        self.l = l


class SingularPointError(SemanticError):
    """A defining map drops rank at the requested point."""

    def __init__(self, message, index):
        super().__init__(message)
        self.index = index


class ConstructionError(RigidwebError):
    """A constructed object failed its own verification."""

    def __init__(self, message, verdict=None):
        super().__init__(message)
        self.verdict = verdict


class BudgetExceeded(RigidwebError):
    """An enumeration or search would exceed its configured bound (exit code 4)."""


class SamplingError(RigidwebError):
    """Random generation kept producing degenerate draws."""
