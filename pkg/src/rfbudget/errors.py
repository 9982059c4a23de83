"""Exception and warning types shared across the package."""


class RfBudgetError(Exception):
    """Base class for all model errors raised by this package."""


class FitError(RfBudgetError):
    """A least-squares fit could not be set up or did not converge."""


class UnreachableVoltageError(RfBudgetError):
    """Target voltage is at or above the harvester's open-circuit voltage."""


class EscDepletedError(RfBudgetError):
    """The energy store cannot supply the requested withdrawal.

    ``packet`` is the 1-based packet number within a burst (None outside a
    burst), ``segment`` names the withdrawal ("wake-up", "phy", "mhr",
    "msdu", "fcs", "inter-packet", "sleep"), and ``bit`` is the 1-based bit
    index within the segment for per-bit drains.
    """

    def __init__(self, message: str, *, packet: int | None = None,
                 segment: str | None = None, bit: int | None = None):
        super().__init__(message)
        self.packet = packet
        self.segment = segment
        self.bit = bit


class TraceParseError(RfBudgetError):
    """A CSV input file could not be parsed; ``line`` is 1-based."""

    def __init__(self, message: str, *, line: int | None = None):
        super().__init__(message)
        self.line = line


class BrownoutWarning(UserWarning):
    """Supply voltage fell below the device's minimum operating voltage.

    The timing/energy constants are only validated down to the brown-out
    level; results below it are extrapolations.
    """
