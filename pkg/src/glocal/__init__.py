"""Step-size rules, first-order optimizers and complexity calculators for glocally smooth objectives."""
from .errors import (
    GlocalError,
    InconsistentOptimum,
    InputError,
    ParseError,
    PreconditionError,
    SearchFailure,
    StationaryPoint,
    UnboundedDirectionError,
    UnsupportedError,
)
from .problems import (
    HuberProblem,
    LeastSquaresProblem,
    LogisticProblem,
    Objective,
    QuadraticProblem,
    TwoRegimeProblem,
    component_grad,
    coord_partial,
    evaluate,
    grad,
)
from .datasets import Dataset, gen_realizable_ls, gen_separable_logistic, parse_libsvm, to_libsvm
from .linesearch import (
    ArmijoConfig,
    LOConfig,
    SearchOutcome,
    armijo_search,
    line_optimize,
    nag_two_step_search,
    stochastic_armijo,
)
from .stepsizes import AdgdState, adgd_step, fixed_step, polyak_step
from .optimizers import (
    AdGD,
    Armijo,
    Fixed,
    LineOpt,
    Polyak,
    StopRule,
    Trace,
    TraceRecord,
    nag_momentum_form,
    run_cd,
    run_gd,
    run_nag,
    run_nlcg,
    run_sgd,
)
from .theory import (
    ComplexityBound,
    GlocalProfile,
    complexity_bound,
    gdlo_vs_nag,
    lambert_w0,
    logistic_glocal,
    optimal_delta_logistic,
    r2_quadratic,
)

__version__ = "0.1.0"
