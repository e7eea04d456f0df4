"""Sparse density estimation on [0,1] with data-driven constraints."""

__version__ = "0.1.0"

from .errors import (BudgetExceededError, ConfigError, DictionaryError,
                     IllConditionedError, QuadratureError, SolverError,
                     SparseDensityError)
from .dictionary import (Dictionary, GramMatrix, build_dictionary,
                         design_matrix, evaluate, gram, gram_entry_quadrature,
                         haar_system, load_gram_cache, member_values,
                         save_gram_cache, synthesize)
from .empirical import (EmpiricalStats, Sample, beta_hat, compute_stats, eta,
                        eta_envelopes, make_sample, non_adaptive_eta,
                        sigma_hat_sq, sigma_hat_sq_pairwise, sigma_tilde_sq,
                        stats_from_design)
from .solvers import (CoefficientVector, DantzigProblem, SolverOptions,
                      SolverReport, dantzig_solve, lasso_solve,
                      soft_threshold_estimate, two_step_refit)
from .analysis import (AssumptionCheck, StructuralReport, check_assumptions,
                       local_assumption_margin, oracle_bound_rhs,
                       restricted_correlation, restricted_eigenvalues,
                       structural_report)
from .densities import (TrueDensity, density_cdf, density_eval, get_density,
                        l2_risk, sample, true_coefficients)
from .experiments import (ExperimentConfig, RunResult, boxplot_stats,
                          calibration_sweep, run_experiment)
from ._kernels import KERNEL_BACKEND

__all__ = [
    "__version__", "KERNEL_BACKEND",
    "SparseDensityError", "DictionaryError", "QuadratureError", "ConfigError",
    "SolverError", "IllConditionedError", "BudgetExceededError",
    "Dictionary", "GramMatrix", "build_dictionary", "haar_system",
    "member_values", "evaluate", "design_matrix", "synthesize", "gram",
    "gram_entry_quadrature", "save_gram_cache", "load_gram_cache",
    "Sample", "make_sample", "beta_hat", "sigma_hat_sq",
    "sigma_hat_sq_pairwise", "sigma_tilde_sq", "eta", "non_adaptive_eta",
    "eta_envelopes", "EmpiricalStats", "compute_stats", "stats_from_design",
    "DantzigProblem", "SolverOptions", "SolverReport", "CoefficientVector",
    "dantzig_solve", "lasso_solve", "two_step_refit",
    "soft_threshold_estimate",
    "AssumptionCheck", "StructuralReport", "restricted_eigenvalues",
    "restricted_correlation", "check_assumptions", "local_assumption_margin",
    "oracle_bound_rhs", "structural_report",
    "TrueDensity", "get_density", "density_eval", "density_cdf", "sample",
    "true_coefficients", "l2_risk",
    "ExperimentConfig", "RunResult", "run_experiment", "calibration_sweep",
    "boxplot_stats",
]
