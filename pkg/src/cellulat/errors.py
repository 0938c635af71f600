"""Exception hierarchy shared across the simulator."""


class CellulatError(Exception):
    """Base class for all simulator errors."""


# -- blackboard --------------------------------------------------------------

class UnknownLevel(CellulatError):
    pass


class NegativeMagnitude(CellulatError):
    pass


# -- agents ------------------------------------------------------------------

class DuplicateIdentity(CellulatError):
    pass


class InvalidRank(CellulatError):
    pass


class UnknownCompartment(CellulatError):
    pass


class UnknownSite(CellulatError):
    pass


class NotDimerized(CellulatError):
    pass


class NotPhosphorylated(CellulatError):
    pass


class NotActive(CellulatError):
    pass


class UnknownPartner(CellulatError):
    pass


class UnknownIdentity(CellulatError):
    pass


class ConservationViolation(CellulatError):
    pass


class NegativeConcentration(CellulatError):
    pass


class DomainBusy(CellulatError):
    pass


class NotInIPV(CellulatError):
    pass


class InactiveSource(CellulatError):
    pass


class UnknownDomain(CellulatError):
    pass


# -- pathway files -----------------------------------------------------------

class PathwaySyntaxError(CellulatError):
    """Malformed document.  Carries the character position of the failure."""

    def __init__(self, message, line=None, column=None, pos=None):
        super().__init__(message)
        self.line = line
        self.column = column
        self.pos = pos


class SchemaError(CellulatError):
    """Structurally valid document that violates the pathway schema."""

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location


class DuplicateAcrossSections(CellulatError):
    pass


class LevelMismatch(CellulatError):
    pass


class UnknownEndpoint(CellulatError):
    pass


class InvalidLinkKind(CellulatError):
    pass


# -- experiments / service ---------------------------------------------------

class UnknownAgent(CellulatError):
    pass


class ValidationFailed(CellulatError):
    """Raised when a pathway with validation errors is loaded or run."""

    def __init__(self, report):
        super().__init__("pathway failed validation: %s" % (report.errors,))
        self.report = report


class AxisMismatch(CellulatError):
    pass


class IoError(CellulatError):
    pass


class UnknownSession(CellulatError):
    pass
