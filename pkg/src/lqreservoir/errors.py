"""Exception hierarchy shared by all modules."""


class LQResError(Exception):
    """Base class for package errors."""


class InvalidDimensionError(LQResError, ValueError):
    pass


class InvalidParametersError(LQResError, ValueError):
    pass


class UnsupportedParametersError(InvalidParametersError):
    pass


class SingularParametersError(InvalidParametersError):
    pass


class DegenerateFamilyError(InvalidParametersError):
    pass


class WrongFamilyError(InvalidParametersError):
    pass


class StabilityError(InvalidParametersError):
    """Parameters outside the dynamically stable region (e.g. zeta >= 1)."""


class TruncationError(LQResError, RuntimeError):
    """The requested Fock truncation cannot represent the state."""


class DegeneracyError(LQResError, RuntimeError):
    """Steady state is not unique at the given truncation."""


class InfeasibleDesignError(LQResError, ValueError):
    pass


class SchemeError(InvalidParametersError):
    """Drive detunings do not follow the sideband scheme."""


class ParametricResonanceError(InvalidParametersError):
    """Mean-field denominator vanishes."""
