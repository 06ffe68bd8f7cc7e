"""Exception hierarchy."""


class NullcylError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(NullcylError):
    """Operands have incompatible or unsupported dimensions."""


class DegenerateSubspaceError(NullcylError):
    """A subspace expected to be space-like has a degenerate induced metric."""


class DegenerateNormalBundleError(NullcylError):
    """No seed vector pairs non-trivially with the given null normal."""


class NotNormalError(NullcylError):
    """A vector expected to be normal to the tangent space is not."""


class NotOnCylinderError(NullcylError):
    """The immersion violates the null-cylinder constraint at a point."""


class StencilError(NullcylError):
    """A finite-difference stencil would leave the declared parameter domain."""


class EvalDomainError(NullcylError):
    """An expression hit a singular point (log/sqrt of a negative, zero divisor)."""

    def __init__(self, reason, subexpr=None, point=None):
        self.reason = reason
        self.subexpr = subexpr
        self.point = point
        msg = reason
        if subexpr is not None:
            msg += f" in '{subexpr}'"
        if point is not None:
            msg += f" at point {tuple(point)}"
        super().__init__(msg)


class DslSyntaxError(NullcylError):
    """Lexical or syntax error in the immersion DSL, with source position."""

    def __init__(self, message, line, col):
        self.line = line
        self.col = col
        super().__init__(f"{line}:{col}: {message}")


class UndeclaredIdentifierError(DslSyntaxError):
    """An expression uses a name that is neither a parameter nor a constant."""


class PreconditionError(NullcylError):
    """Input data violates a documented precondition."""


class BlowDownError(NullcylError):
    """The radial profile reached zero inside the requested interval."""

    def __init__(self, s_critical):
        self.s_critical = s_critical
        super().__init__(f"profile reached zero near s = {s_critical}")
