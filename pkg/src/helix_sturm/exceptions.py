"""Exception hierarchy for helix_sturm."""


class HelixSturmError(Exception):
    """Base class for all errors raised by this package."""


class InvalidDomain(HelixSturmError, ValueError):
    """Radial domain or parameter outside its admissible range."""


class NonFinitePotential(HelixSturmError, ArithmeticError):
    """The scaled potential is not finite at a grid node.

    Usually means ``r_min`` sits too close to a singularity of the potential.
    """

    def __init__(self, r, value):
        self.r = float(r)
        self.value = value
        super().__init__(f"potential is not finite at r={self.r!r} (value {value!r})")


class ConvergenceFailure(HelixSturmError, RuntimeError):
    """Inverse iteration did not reach the residual bound for an eigenvalue."""

    def __init__(self, index, residual=None):
        self.index = index
        self.residual = residual
        msg = f"inverse iteration failed for eigenvalue index {index}"
        if residual is not None:
            msg += f" (best residual {residual:.3e})"
        super().__init__(msg)


class ZeroFunction(HelixSturmError, ValueError):
    """Cannot normalize an identically vanishing function."""


class SchemaError(HelixSturmError, ValueError):
    """Configuration document failed validation.

    ``path`` is the dotted key path of the offending entry.
    """

    def __init__(self, path, reason):
        self.path = path
        self.reason = reason
        where = path if path else "<root>"
        super().__init__(f"{where}: {reason}")
