"""Exception types shared across the package."""


class CapExceededError(RuntimeError):
    """An exact computation would exceed its configured size cap."""


class InfeasibleError(RuntimeError):
    """A linear program or combinatorial problem has no feasible point."""


class UnboundedError(RuntimeError):
    """A linear program is unbounded below."""


class GuaranteeViolation(RuntimeError):
    """A proven postcondition failed at runtime.

    Carries a ``diagnostics`` dict with the quantities that were compared.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class InstanceParseError(ValueError):
    """Malformed instance or norm description; ``path`` names the field."""

    def __init__(self, message, path=""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path
