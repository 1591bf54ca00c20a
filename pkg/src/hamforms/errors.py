"""Exception hierarchy. Every domain error derives from HamformsError so the
CLI can map it to exit code 1."""


class HamformsError(Exception):
    pass


class UnsupportedAlgebra(HamformsError):
    pass


class AlgebraMismatch(HamformsError):
    pass


class DivisionByZero(HamformsError, ZeroDivisionError):
    pass


class NotASublattice(HamformsError):
    pass


class SingularMatrix(HamformsError):
    pass


class FixesInfinity(HamformsError):
    pass


class DegenerateArc(HamformsError):
    pass


class NotIndefinite(HamformsError):
    pass


class NotPositiveDefinite(HamformsError):
    pass


class NotDefinite(HamformsError):
    pass


class ReductionOverflow(HamformsError):
    pass


class NoRationalLocusPoint(HamformsError):
    pass


class UnsupportedExactPoint(HamformsError):
    pass


class BadDiscriminant(HamformsError):
    pass
