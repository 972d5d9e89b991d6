"""
Exceptions raised by the solver library
"""


class InvalidGridError(ValueError):
    pass


class InvalidStencilError(ValueError):
    pass


class NotApplicableError(ValueError):
    """
    The operation doesn't apply to this input, like asking for the stencil of a
    boundary node or for the error of a problem without an exact solution
    """


class OutOfGridError(ValueError):
    pass


class InvalidDataError(ValueError):
    pass


class LinearSolverError(RuntimeError):
    def __init__(self, message: str, residual: float) -> None:
        super().__init__(message)
        self.residual = residual


class DivergenceError(RuntimeError):
    pass
