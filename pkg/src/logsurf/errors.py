"""Exception hierarchy shared by every module of the package."""


class LogSurfError(Exception):
    """Base class for all errors raised by logsurf."""


# linear algebra
class SingularMatrix(LogSurfError):
    pass


class NotSymmetric(LogSurfError):
    pass


# models
class InvalidModel(LogSurfError):
    """Input data violates a structural invariant.

    ``violations`` holds the machine-readable list produced by ``validate``.
    """

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class NotNegativeDefinite(LogSurfError):
    pass


class NotContractible(NotNegativeDefinite):
    pass


class ContractedSupport(LogSurfError):
    pass


class NotMinusOneCurve(LogSurfError):
    pass


class NotConnected(LogSurfError):
    pass


# discrepancy
class BoundaryOutOfRange(InvalidModel):
    pass


class NotLogResolution(LogSurfError):
    pass


class InvalidCurveData(LogSurfError):
    pass


class NotNefOver(LogSurfError):
    pass


# mmp
class EmptyUniverse(LogSurfError):
    pass


class NotBirationalRay(LogSurfError):
    pass


class ContractionNotNegDef(LogSurfError):
    pass


class ModelingInconsistency(LogSurfError):
    pass


class NotGMRLC(LogSurfError):
    pass


# toric
class NotComplete(LogSurfError):
    pass


class NotPrimitive(LogSurfError):
    pass
