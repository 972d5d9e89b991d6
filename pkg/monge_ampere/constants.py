# Grid sizes used by the published error tables
DEFAULT_N_VALUES = (31, 45, 63, 89, 127)

# 17-point stencil
DEFAULT_STENCIL_WIDTH = 2

# Outer iterations stop when the increment (L-inf) drops below this
DEFAULT_TOLERANCE = 1e-8

# Relative residual tolerance of the inner Poisson solves. Has to sit well below
# DEFAULT_TOLERANCE since Methods B and C difference the Poisson solution twice.
POISSON_TOLERANCE = 1e-10

# Largest N for which the Poisson problem is solved by sparse LU instead of CG
DIRECT_SOLVE_MAX_N = 63

# Larger steps overshoot det = f near the corners of the domain and g only grows
DEFAULT_ALPHA = 0.1
DEFAULT_G0 = 0.0
DEFAULT_DELTA = 0.0

# Outer iteration caps. Euler needs O(N^2) steps because of the CFL-type time step.
EULER_ITERATIONS_PER_NODE = 10
NEWTON_MAX_ITERATIONS = 50
FIXED_POINT_MAX_ITERATIONS = 5000

# Damped Newton line search
NEWTON_BACKTRACK = 0.5
NEWTON_MIN_STEP = 2.0**-10
JACOBIAN_REGULARIZATION = 1e-10

# Method B gives up once |g| grows past this factor of (1 + |g0|)
DIVERGENCE_FACTOR = 1e6

# Method C stops once the Monge-Ampere residual hasn't improved for this many steps
DEFAULT_PATIENCE = 20
