class OofaError(Exception):
    """Base class for every error raised by the design toolkit."""


class UnsupportedOrder(OofaError):
    pass


class DegenerateOrder(OofaError):
    pass


class InfeasibleSize(OofaError):
    pass


class CandidateExhausted(OofaError):
    pass


class SizeLimit(OofaError):
    pass


class InvalidPoint(OofaError):
    pass


class EmptyDesign(OofaError):
    pass


class ShapeMismatch(OofaError):
    pass


class NoMoveAvailable(OofaError):
    pass


class ConfigInvalid(OofaError):
    pass


class UnknownLabel(OofaError):
    pass


class ParseError(OofaError):
    """Malformed design file; carries the offending location when known."""

    def __init__(self, message, row=None, column=None):
        self.row = row
        self.column = column
        location = []
        if row is not None:
            location.append(f"row {row}")
        if column is not None:
            location.append(f"column {column}")
        if location:
            message = f"{message} ({', '.join(location)})"
        super().__init__(message)


class DesignValidationError(OofaError):
    def __init__(self, violations):
        self.violations = list(violations)
        summary = "; ".join(str(v) for v in self.violations[:5])
        if len(self.violations) > 5:
            summary += f"; ... {len(self.violations) - 5} more"
        super().__init__(f"design failed validation: {summary}")


class RankDeficient(OofaError):
    def __init__(self, message, label=None):
        self.label = label
        super().__init__(message)


class ZeroVariance(OofaError):
    def __init__(self, label):
        self.label = label
        super().__init__(f"column {label} has zero variance")
