"""Exception hierarchy. Every error is a ``ValueError`` so callers that only
care about bad input can catch that."""


class GeometryError(ValueError):
    pass


class EmptyInput(GeometryError):
    pass


class DegenerateInput(GeometryError):
    pass


class DegeneratePolygon(GeometryError):
    pass


class NonUnitNormal(GeometryError):
    pass


class NonPositiveSize(GeometryError):
    pass


class NonPositiveAxis(GeometryError):
    pass


class ZeroDirection(GeometryError):
    pass


class GenerationFailed(GeometryError):
    pass


class OriginNotInterior(GeometryError):
    pass


class NonPositiveSupport(GeometryError):
    pass


class FlatBody(GeometryError):
    pass


class DegeneratePair(GeometryError):
    pass


class NonConvergentSequence(GeometryError):
    pass


class ParseError(GeometryError):
    pass


class InvalidTolerance(GeometryError):
    pass


class PreconditionViolated(GeometryError):
    """Raised when a check's hypotheses do not hold.

    ``precondition`` names the failed hypothesis so that "not applicable"
    is never confused with "checked and false".
    """

    def __init__(self, precondition: str, detail: str = ""):
        self.precondition = precondition
        self.detail = detail
        msg = precondition if not detail else f"{precondition}: {detail}"
        super().__init__(msg)
