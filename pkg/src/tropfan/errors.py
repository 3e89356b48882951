"""Exception types shared across the package."""


class TropfanError(Exception):
    """Base class for all library errors."""


class ZeroVector(TropfanError, ValueError):
    pass


class ZeroMatrix(TropfanError, ValueError):
    pass


class DimensionMismatch(TropfanError, ValueError):
    pass


class NoSolution(TropfanError):
    """An integer linear system has no (unique) integral solution.

    ``reason`` is one of ``"inconsistent"``, ``"non-integral"`` or
    ``"underdetermined"``.
    """

    INCONSISTENT = "inconsistent"
    NON_INTEGRAL = "non-integral"
    UNDERDETERMINED = "underdetermined"

    def __init__(self, reason: str, detail: str = ""):
        self.reason = reason
        super().__init__(f"{reason}: {detail}" if detail else reason)


class Unbalanced(TropfanError):
    def __init__(self, message: str, faces=()):
        self.faces = tuple(faces)
        super().__init__(message)


class NotOneDimensional(TropfanError, ValueError):
    pass


class NegativeWeight(TropfanError):
    pass


class GenericityFailure(TropfanError):
    pass


class AmbientSpaceNotSpanned(TropfanError):
    pass


class RayNotInClass(TropfanError, KeyError):
    pass


class NotRegular(TropfanError):
    pass


class NotRegularFunction(TropfanError):
    pass


class NotBergmanImage(TropfanError):
    pass


class FactorizationFailed(TropfanError):
    pass


class NotRegularSequence(TropfanError):
    pass


class StructureViolation(TropfanError):
    pass


class SearchBoundExceeded(TropfanError):
    pass


class ConventionViolation(TropfanError, ValueError):
    pass


class ParseError(TropfanError):
    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


class SchemaError(TropfanError):
    def __init__(self, constraint: str, message: str):
        self.constraint = constraint
        super().__init__(f"{constraint}: {message}")
