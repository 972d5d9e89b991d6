from dataclasses import dataclass
from typing import Optional

from monge_ampere.constants import (
    DEFAULT_ALPHA,
    DEFAULT_DELTA,
    DEFAULT_G0,
    DEFAULT_PATIENCE,
    DEFAULT_STENCIL_WIDTH,
    DEFAULT_TOLERANCE,
    EULER_ITERATIONS_PER_NODE,
    FIXED_POINT_MAX_ITERATIONS,
    NEWTON_BACKTRACK,
    NEWTON_MAX_ITERATIONS,
    NEWTON_MIN_STEP,
    POISSON_TOLERANCE,
)
from monge_ampere.enums import DtPolicy, InitialGuess, Method, PoissonSolver


@dataclass(frozen=True)
class MethodConfig:
    stencil_width: int = DEFAULT_STENCIL_WIDTH
    # On the L-inf norm of the solution increment (of g for Methods B and C)
    tolerance: float = DEFAULT_TOLERANCE
    # None picks the per-method default, see iteration_cap()
    max_iterations: Optional[int] = None

    dt_policy: DtPolicy = DtPolicy.ADAPTIVE
    # Time step for DtPolicy.FIXED. None estimates it once from the initial guess.
    dt: Optional[float] = None

    newton_backtrack: float = NEWTON_BACKTRACK
    newton_min_step: float = NEWTON_MIN_STEP

    # Method C relaxation, strictly between 0 and 1
    alpha: float = DEFAULT_ALPHA
    # Constant starting value of g for Methods B and C
    g0: float = DEFAULT_G0
    # Eigenvalue clamp of the wide stencil residual
    delta: float = DEFAULT_DELTA
    # Method C stops when the residual hasn't improved for this many iterations
    patience: int = DEFAULT_PATIENCE

    initial_guess: InitialGuess = InitialGuess.POISSON
    poisson_solver: PoissonSolver = PoissonSolver.AUTO
    poisson_tolerance: float = POISSON_TOLERANCE

    def validate(self) -> None:
        """
        Raises a ValueError if something is wrong with this config
        """
        if self.stencil_width < 1:
            raise ValueError("Stencil width must be at least 1")
        if self.tolerance <= 0:
            raise ValueError("Tolerance must be positive")
        if self.max_iterations is not None and self.max_iterations < 1:
            raise ValueError("Need at least one iteration")
        if self.dt is not None and self.dt <= 0:
            raise ValueError("Time step must be positive")
        if not 0 < self.newton_backtrack < 1:
            raise ValueError("Newton backtracking factor must be in (0, 1)")
        if not 0 < self.newton_min_step <= 1:
            raise ValueError("Newton minimum step must be in (0, 1]")
        if not 0 < self.alpha < 1:
            raise ValueError(f"alpha must be in (0, 1), got {self.alpha}")
        if self.g0 < 0:
            raise ValueError("g0 must be non-negative")
        if self.delta < 0:
            raise ValueError("delta must be non-negative")
        if self.patience < 1:
            raise ValueError("Patience must be at least 1")
        if self.poisson_tolerance <= 0:
            raise ValueError("Poisson tolerance must be positive")

    def iteration_cap(self, method: Method, n: int) -> int:
        if self.max_iterations is not None:
            return self.max_iterations
        if method is Method.A_EULER:
            return EULER_ITERATIONS_PER_NODE * n * n
        if method is Method.A_NEWTON:
            return NEWTON_MAX_ITERATIONS
        return FIXED_POINT_MAX_ITERATIONS
