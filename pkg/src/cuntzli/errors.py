"""Exception hierarchy shared by all modules."""


class CuntzLiError(Exception):
    """Base class for every error raised by this package."""


class SingularMatrix(CuntzLiError, ValueError):
    pass


class DimensionMismatch(CuntzLiError, ValueError):
    pass


class WrongDimension(CuntzLiError, ValueError):
    pass


class DeterminantTooSmall(CuntzLiError, ValueError):
    pass


class NotFactorizable(CuntzLiError):
    pass


class NotFound(CuntzLiError):
    """A bounded search ended without a witness. Inconclusive, not a refutation."""

    def __init__(self, depth, message=None):
        self.depth = depth
        super().__init__(message or f"no witness found up to depth {depth}")


class OreSearchFailed(NotFound):
    def __init__(self, a, b, depth):
        self.pair = (a, b)
        super().__init__(depth, f"no common multiple of {a} and {b} up to depth {depth}")


class NotComposable(CuntzLiError):
    pass


class ResolutionTooCoarse(CuntzLiError):
    pass


class NotSupported(CuntzLiError):
    pass


class NotAssociative(CuntzLiError, ValueError):
    def __init__(self, triple):
        self.triple = triple
        super().__init__(f"multiplication table is not associative on basis triple {triple}")


class NotCommutative(CuntzLiError, ValueError):
    def __init__(self, pair):
        self.pair = pair
        super().__init__(f"multiplication table is not commutative on basis pair {pair}")


class NoIntertwiner(CuntzLiError):
    pass


class ParseError(CuntzLiError, ValueError):
    pass
