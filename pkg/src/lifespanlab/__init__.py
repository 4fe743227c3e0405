"""Numerical lifespan laboratory for the semilinear damped wave equation.

Core pieces: a radial heat-kernel quadrature layer, a finite-difference
blow-up solver, Gaussian-weighted trajectory functionals, a blow-up ODE
integrator, and sweep/fit orchestration, wrapped by a FastAPI service with
a thin CLI client.
"""

from .errors import ConfigError, GridBudgetError, InsufficientDataError, NonFiniteError, NumericalError
from .grids import RadialGrid, RadialProfile, radial_laplacian, unit_sphere_area
from .heatkernel import (
    KernelPoint,
    convolve_with_kernel,
    eval_kernel,
    heat_residual,
    kernel_mass,
    kernel_profile,
    kernel_values,
    make_kernel_grid,
    semigroup_residual,
    truncation_radius,
    weighted_moment,
)
from .wavesolver import (
    BlowupReport,
    ProblemSpec,
    RunStatus,
    SolutionSnapshot,
    SolverState,
    detect_blowup,
    discrete_energy,
    initial_state,
    make_grid,
    run,
    sample_initial_profiles,
    step,
)
from .functionals import (
    FunctionalTrace,
    SolverTrace,
    data_term,
    duhamel_residual,
    evaluate_trace,
    exp_tail_ratio,
    growth_envelope,
    history_term,
    holder_bound_constant,
    source_term,
    velocity_mass,
    velocity_moment_constant,
    weighted_lp_norm,
    weighted_mass,
)
from .odeblowup import OdeParams, OdeResult, OdeStatus, first_order_reference, integrate, sweep
from .records import FitResult, LifespanRecord
from .experiments import ExperimentSpec, run_experiment
from .fitting import fit_critical, fit_subcritical, subcritical_exponent
from .reporting import emit_report, read_records, read_trace, render_report, write_trace

__version__ = "0.1.0"
