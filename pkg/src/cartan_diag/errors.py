"""Exception types raised across the package."""


class CartanDiagError(Exception):
    """Base class for all errors raised by cartan_diag."""


class UnsupportedRootSystem(CartanDiagError, ValueError):
    pass


class NonReducedWord(CartanDiagError, ValueError):
    pass


class PoleError(CartanDiagError, ZeroDivisionError):
    """A closed-form denominator vanished.

    ``root`` holds the offending root (simple-root coordinates) when known.
    """

    def __init__(self, message, root=None):
        super().__init__(message)
        self.root = root


class NonGeneric(CartanDiagError, ArithmeticError):
    """Matrix lies (numerically) in a lower stratum of the LDU decomposition."""


class PhaseError(CartanDiagError, ArithmeticError):
    """LDU diagonal phases are not +-1 for an input that should be Cartan-symmetric."""


class InadmissibleComponent(CartanDiagError, ValueError):
    pass


class QuadratureError(CartanDiagError, RuntimeError):
    pass


class StepTooSmall(CartanDiagError, ValueError):
    """Finite-difference step is in the round-off dominated regime."""


class ConfigError(CartanDiagError, ValueError):
    pass
