"""Exception types shared across the package."""


class RankkitError(Exception):
    """Base class for all package-specific errors."""


class MachineDecodeError(RankkitError):
    """A machine program text could not be parsed.

    Never raised by the total index-to-program decoding; only by the
    line-based assembly reader.
    """


class SetExprError(RankkitError):
    """A textual set description failed to parse."""

    def __init__(self, message: str, token: str = "", position: int = -1):
        super().__init__(message)
        self.token = token
        self.position = position


class PreconditionError(RankkitError):
    """A construction was invoked on operands that violate its contract."""


class PremiseViolation(RankkitError):
    """A decision procedure observed evidence contradicting its premises.

    Distinguished from an ordinary reject/inconclusive answer: the inputs
    lied (e.g. two enumerated members were assigned the same rank).
    """

    def __init__(self, message: str, witness: dict | None = None):
        super().__init__(message)
        self.witness = witness or {}


class InjectivityError(RankkitError):
    """A map required to be one-to-one mapped two inputs to one output."""

    def __init__(self, message: str, witness: dict | None = None):
        super().__init__(message)
        self.witness = witness or {}
