"""Exception hierarchy shared by every deforma module."""


class DeformaError(Exception):
    """Base class for all library errors."""


class FieldMismatch(DeformaError):
    pass


class ShapeError(DeformaError):
    pass


class InvalidStructure(DeformaError):
    """Raised when an input structure fails its axioms; carries the report."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class DegreeOutOfRange(DeformaError):
    pass


class DegreeError(DeformaError):
    pass


class DimensionCap(DeformaError):
    pass


class NotValidated(DeformaError):
    pass


class NotACocycle(DeformaError):
    pass


class NotInF0(DeformaError):
    pass


class TheoryMismatch(DeformaError):
    pass


class ParseError(DeformaError):
    pass
