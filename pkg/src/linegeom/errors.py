"""Exception types shared across the package."""


class LineGeomError(Exception):
    pass


# field arithmetic

class NotPrimePower(LineGeomError, ValueError):
    pass


class DivisionByZero(LineGeomError, ZeroDivisionError):
    pass


class MixedFields(LineGeomError, ValueError):
    pass


# model building

class IncidenceOracleMismatch(LineGeomError):
    """Shared-point and Klein-form incidence disagree; always an internal bug."""


# abstract structures

class InvalidStructure(LineGeomError, ValueError):
    """Relation matrix is not square, symmetric and reflexive."""


class NotIncident(LineGeomError, ValueError):
    pass


class SigmaDegenerate(LineGeomError):
    def __init__(self, message, a=None, b=None):
        super().__init__(message)
        self.a = a
        self.b = b


class ColoringInconsistent(LineGeomError):
    def __init__(self, message, first=None, second=None):
        super().__init__(message)
        self.first = first
        self.second = second


class KindMismatch(LineGeomError, TypeError):
    pass


# reguli

class NotSkew(LineGeomError, ValueError):
    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class EmptyRegulus(LineGeomError):
    pass


class ConstructionFailed(LineGeomError):
    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class ConjugateIllDefined(LineGeomError):
    def __init__(self, message, first=None, second=None):
        super().__init__(message)
        self.first = first
        self.second = second


# file formats

class StructureFormatError(LineGeomError, ValueError):
    pass
