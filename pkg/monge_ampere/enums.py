from enum import Enum


class Method(Enum):
    A_EULER = "A-euler"
    A_NEWTON = "A-newton"
    B = "B"
    C = "C"

    def __str__(self) -> str:
        return self.value

    @property
    def column(self) -> str:
        """
        Letter of the method, shared by both ways of solving the wide stencil scheme
        """
        return self.value[0]


class DtPolicy(Enum):
    FIXED = "fixed"
    ADAPTIVE = "adaptive"

    def __str__(self) -> str:
        return self.value


class InitialGuess(Enum):
    # Solution of the Poisson problem with g = 0, i.e. Laplacian(u) = 2 sqrt(f)
    POISSON = "poisson"
    # Dirichlet data on the boundary, zero inside
    BOUNDARY = "boundary"

    def __str__(self) -> str:
        return self.value


class PoissonSolver(Enum):
    AUTO = "auto"
    CG = "cg"
    DIRECT = "direct"

    def __str__(self) -> str:
        return self.value


class StopReason(Enum):
    CONVERGED = "converged"
    MAX_ITERATIONS = "max-iterations"
    STAGNATED = "stagnated"
    DIVERGED = "diverged"


class OutputFormat(Enum):
    CSV = "csv"
    TEXT = "text"

    def __str__(self) -> str:
        return self.value
