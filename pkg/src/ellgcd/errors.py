"""Exception hierarchy shared by every ellgcd module."""


class EllGcdError(Exception):
    """Base class for all library errors."""


class DegenerateInput(EllGcdError, ValueError):
    """Zero polynomial or zero rational function where a nonzero one is needed."""


class NotEffective(EllGcdError, ValueError):
    pass


class SingularModel(EllGcdError, ValueError):
    """The Weierstrass discriminant vanishes identically."""


class NotOnCurve(EllGcdError, ValueError):
    pass


class IdenticallyZeroSection(EllGcdError):
    """A section coincides with the zero section, so its pullback is undefined.

    ``index`` identifies which member of a section pair failed (1 or 2) when
    the error comes out of a pair computation, otherwise it is None.
    """

    def __init__(self, message="section is identically the zero section", index=None):
        super().__init__(message)
        self.index = index


class ResourceCap(EllGcdError):
    """An intermediate object grew past a configured size cap.

    ``partial`` carries whatever was completed before the cap was hit.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class BadFiber(EllGcdError, ValueError):
    pass


class SectionPole(EllGcdError):
    """The section passes through the point at infinity of the fiber."""


class DependentInputs(EllGcdError, ValueError):
    pass


class SchemaError(EllGcdError, ValueError):
    """Configuration file failed validation."""
