"""Exception types shared across the package."""


class PointedCatError(Exception):
    """Base class; carries a machine-readable payload for the CLI."""

    def payload(self):
        return {"type": type(self).__name__, "message": str(self)}


class NonAssociative(PointedCatError):
    def __init__(self, a, b, c):
        super().__init__(f"table is not associative at triple ({a}, {b}, {c})")
        self.triple = (a, b, c)


class NoIdentity(PointedCatError):
    def __init__(self, g):
        super().__init__(f"element 0 is not a two-sided identity (fails at {g})")
        self.element = g


class NotClosed(PointedCatError):
    def __init__(self, what):
        super().__init__(f"set is not closed: {what}")


class BoundExceeded(PointedCatError):
    def __init__(self, what, value, bound):
        super().__init__(f"{what} = {value} exceeds bound {bound}")
        self.what = what
        self.value = value
        self.bound = bound


class ArityUnsupported(PointedCatError):
    pass


class NotAbelian(PointedCatError):
    pass


class NotPointed(PointedCatError):
    def __init__(self, witness):
        super().__init__(f"module category is not pointed: {witness}")
        self.witness = witness


class NoCellExists(PointedCatError):
    pass


class MiddleMismatch(PointedCatError):
    pass


class NonAbelianStabilizer(PointedCatError):
    pass


class NotAFiberFunctor(PointedCatError):
    pass


class InvalidInput(PointedCatError):
    pass
