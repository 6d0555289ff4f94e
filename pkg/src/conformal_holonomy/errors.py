"""Exception types shared by the library and the command line driver."""


class InputError(ValueError):
    """Malformed or inconsistent input (shapes, indices, files, names)."""


class AlgebraFileError(InputError):
    pass


class UnknownAlgebra(InputError):
    pass


class InvalidAlgebra(Exception):
    """Structure constants that do not define a Lie algebra."""

    def __init__(self, message, worst_triple=None, residual=None):
        super().__init__(message)
        self.worst_triple = worst_triple
        self.residual = residual


class NotSemisimple(Exception):
    """The negative Killing form is not positive definite."""


class NoConvergence(ArithmeticError):
    """A bracket closure kept growing past the ambient dimension."""


class ContractViolation(ArithmeticError):
    pass
