"""Exception hierarchy shared by all modules."""


class CurveError(ValueError):
    """A curve is unusable for the requested operation."""


class InvalidCurveError(CurveError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("invalid curve: " + "; ".join(str(v) for v in self.violations))


class DimensionMismatchError(CurveError):
    pass


class ZeroLengthError(CurveError):
    pass


class ReparamError(ValueError):
    """Knots do not describe an element of the closure of the reparametrisation group."""


class GridError(ValueError):
    pass


class EnumerationLimitError(ValueError):
    pass
