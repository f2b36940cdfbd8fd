"""Exception types shared across the package."""


class PrecisionMismatch(ValueError):
    """Elements of rings with different precision (or different rings) were combined."""


class PrecisionExhausted(ArithmeticError):
    """A decision needed more p-adic precision than the working precision provides."""


class NotAUnit(ArithmeticError):
    pass


class NotASquare(ArithmeticError):
    pass


class SeedsNotCoprime(ValueError):
    pass


class ProductMismatch(ValueError):
    pass


class NotCertified(ValueError):
    """An operation needing a (**)-certificate received a failed one."""


class NotStar(ValueError):
    """An operation needing good ordinary reduction received a non-(*) certificate."""


class UnsupportedExtension(NotImplementedError):
    pass


class CurveFormatError(ValueError):
    """Malformed curve input (bad degree, non-monic, not squarefree, schema errors)."""


class ConsistencyError(AssertionError):
    """Two independent computations of the same quantity disagreed."""
