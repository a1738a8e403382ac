"""Exception hierarchy."""


class CxHypError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(CxHypError, ValueError):
    pass


class NonConvergence(CxHypError, ArithmeticError):
    """QR iteration exceeded its sweep budget."""


class Singular(CxHypError, ArithmeticError):
    pass


class ZeroVector(CxHypError, ValueError):
    pass


class NotUnitary(CxHypError, ValueError):
    pass


class NotMember(CxHypError, ValueError):
    """Matrix does not preserve the Hermitian form within tolerance."""


class DegenerateDenominator(CxHypError, ArithmeticError):
    pass


class NotInterior(CxHypError, ValueError):
    pass


class OutsideClosedBall(CxHypError, ValueError):
    pass


class OutsideDomain(CxHypError, ValueError):
    pass


class NotElliptic(CxHypError, ValueError):
    pass


class NotHyperbolic(CxHypError, ValueError):
    pass


class NotCommuting(CxHypError, ValueError):
    pass


class ZeroXi(CxHypError, ValueError):
    pass


class NotPartialIsometry(CxHypError, ValueError):
    pass


class DegenerateSpan(CxHypError, ArithmeticError):
    pass


class CoincidentPoints(CxHypError, ValueError):
    pass


class BoundaryViolation(CxHypError, ValueError):
    pass


class NotStabilizer(CxHypError, ValueError):
    pass


class FormMismatch(CxHypError, ValueError):
    pass


class InvalidTranslation(CxHypError, ValueError):
    """Parameters violate the Heisenberg translation constraints."""


class VerificationFailed(CxHypError, ArithmeticError):
    """A constructed object failed its own numerical postcondition."""


class Unsupported(CxHypError, ValueError):
    """Input falls outside the cases an operation can decide."""
