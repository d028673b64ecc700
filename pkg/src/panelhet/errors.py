"""Exception hierarchy.

Every validation failure raised by the library derives from
:class:`PanelHetError`, which is itself a ``ValueError``. The CLI maps these
to exit code 2 and prints the class name with the message.
"""

from __future__ import annotations


class PanelHetError(ValueError):
    """Base class for input/precondition violations."""


class EmptyInput(PanelHetError):
    pass


class UnbalancedPanel(PanelHetError):
    def __init__(self, units, detail: str = ""):
        self.units = tuple(units)
        msg = "units with missing cells: " + ", ".join(map(str, self.units))
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class DuplicateCell(PanelHetError):
    pass


class NonNumericValue(PanelHetError):
    pass


class PanelTooShort(PanelHetError):
    pass


class LagTooLarge(PanelHetError):
    pass


class DegenerateUnit(PanelHetError):
    def __init__(self, units):
        self.units = tuple(units)
        super().__init__(
            "zero sample variance (constant series) for units: "
            + ", ".join(map(str, self.units))
        )


class InvalidBandwidth(PanelHetError):
    pass


class LengthMismatch(PanelHetError):
    pass


class TooFewUnits(PanelHetError):
    pass


class OutOfDomain(PanelHetError):
    pass


class OutOfSupport(PanelHetError):
    pass


class DegenerateDispersion(PanelHetError):
    pass


class UnsupportedDerivativeKernel(PanelHetError):
    pass
