"""Dantzig, weighted-Lasso, refit and soft-threshold solvers.

All solvers consume a DantzigProblem (Gram matrix G, empirical coefficients
beta_hat, strictly positive per-coordinate bounds eta) and return a
CoefficientVector together with a SolverReport.

The Dantzig program  min ||lam||_1  s.t.  |(G lam)_m - beta_hat_m| <= eta_m
is solved as the split LP  min 1'(p+q), -eta <= G(p-q) - beta_hat <= eta,
p, q >= 0.  Two engines are available: the package's own dense two-phase
simplex (Bland's rule) and scipy's HiGHS; "auto" picks the simplex for small
M and HiGHS above.  Either way the result is certified a posteriori by LP
duality: a dual feasible point is reconstructed from the constraint
multipliers and its objective must match the primal one.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from .._kernels import cd_sweeps
from ..dictionary import GramMatrix
from ..errors import IllConditionedError, SolverError
from .simplex import solve_lp

SUPPORT_TOL = 1e-12
_AUTO_SIMPLEX_MAX_M = 24


@dataclass
class SolverOptions:
    tol_feas: float = 1e-8
    tol_opt: float = 1e-7
    algorithm: str = "auto"        # auto | simplex | highs
    max_iter: int = 100000
    cd_tol_change: float = 1e-10
    cd_tol_kkt: float = 1e-8
    cd_max_sweeps: int = 100000
    refit_max_cond: float = 1e12


@dataclass
class DantzigProblem:
    G: np.ndarray
    beta_hat: np.ndarray
    eta: np.ndarray

    def __post_init__(self):
        if isinstance(self.G, GramMatrix):
            self.G = self.G.entries
        self.G = np.ascontiguousarray(self.G, dtype=float)
        self.beta_hat = np.asarray(self.beta_hat, dtype=float)
        self.eta = np.asarray(self.eta, dtype=float)
        M = self.G.shape[0]
        if self.G.shape != (M, M) or self.beta_hat.shape != (M,) \
                or self.eta.shape != (M,):
            raise ValueError("inconsistent problem dimensions")
        if np.any(self.eta <= 0.0):
            raise ValueError("eta must be strictly positive")


@dataclass
class CoefficientVector:
    values: np.ndarray
    support: np.ndarray
    l1_norm: float
    method: str

    @classmethod
    def from_values(cls, values, method):
        values = np.asarray(values, dtype=float).copy()
        values[np.abs(values) <= SUPPORT_TOL] = 0.0
        support = np.nonzero(values)[0]
        return cls(values=values, support=support,
                   l1_norm=float(np.sum(np.abs(values))), method=method)


@dataclass
class SolverReport:
    iterations: int
    max_constraint_violation: float
    objective: float
    status: str
    duality_gap_or_kkt_residual: float


def _constraint_violation(problem, lam):
    resid = problem.G @ lam - problem.beta_hat
    return float(np.max(np.abs(resid) - problem.eta))


def dantzig_solve(problem, opts=None):
    """L1-minimal coefficient vector under the per-coordinate constraints.

    Returns (CoefficientVector, SolverReport); raises SolverError on an
    infeasible program or iteration limit.
    """
    opts = opts or SolverOptions()
    G, b, e = problem.G, problem.beta_hat, problem.eta
    M = G.shape[0]

    if np.all(np.abs(b) <= e):
        # zero is feasible, hence l1-minimal
        lam = np.zeros(M)
        report = SolverReport(iterations=0, max_constraint_violation=
                              _constraint_violation(problem, lam),
                              objective=0.0, status="Optimal",
                              duality_gap_or_kkt_residual=0.0)
        return CoefficientVector.from_values(lam, "Dantzig"), report

    algorithm = opts.algorithm
    if algorithm == "auto":
        algorithm = "simplex" if M <= _AUTO_SIMPLEX_MAX_M else "highs"

    c = np.ones(2 * M)
    A_ub = np.block([[G, -G], [-G, G]])
    b_ub = np.concatenate([b + e, e - b])

    if algorithm == "simplex":
        x, duals, objective, iterations = solve_lp(c, A_ub, b_ub,
                                                   max_iter=opts.max_iter)
    elif algorithm == "highs":
        res = linprog(c, A_ub=A_ub, b_ub=b_ub, bounds=(0.0, None),
                      method="highs")
        if res.status == 2:
            raise SolverError("Dantzig LP infeasible", status="Infeasible")
        if res.status == 1:
            raise SolverError("Dantzig LP hit the iteration limit",
                              status="MaxIter")
        if res.status != 0:
            raise SolverError(f"Dantzig LP failed: {res.message}",
                              status="Infeasible")
        x = res.x
        duals = res.ineqlin.marginals
        objective = float(res.fun)
        iterations = int(np.sum(res.nit)) if np.ndim(res.nit) else int(res.nit)
    else:
        raise ValueError(f"unknown algorithm {opts.algorithm!r}")

    lam = x[:M] - x[M:2 * M]
    violation = _constraint_violation(problem, lam)
    if violation > opts.tol_feas:
        raise SolverError(
            f"Dantzig solution violates constraints by {violation:.2e}",
            status="Infeasible")

    # duality certificate: w = v - u maximizes b'w - e'|w| over ||G w||_inf <= 1
    u = -np.asarray(duals[:M])
    v = -np.asarray(duals[M:])
    w = v - u
    dual_obj = float(b @ w - e @ np.abs(w))
    gap = float(np.sum(np.abs(lam)) - dual_obj)
    dual_feas = float(np.max(np.abs(G @ w)) - 1.0)
    if abs(gap) > max(opts.tol_opt, opts.tol_opt * abs(objective)) \
            or dual_feas > opts.tol_opt:
        raise SolverError(
            f"duality certificate failed (gap {gap:.2e}, "
            f"dual infeasibility {dual_feas:.2e})", status="MaxIter")

    vec = CoefficientVector.from_values(lam, "Dantzig")
    report = SolverReport(iterations=iterations,
                          max_constraint_violation=violation,
                          objective=vec.l1_norm, status="Optimal",
                          duality_gap_or_kkt_residual=abs(gap))
    return vec, report


def _kkt_residual(G, b, e, lam, q):
    """Max KKT residual of the weighted Lasso at lam (q = G lam)."""
    resid = q - b
    on = np.abs(lam) > SUPPORT_TOL
    res_off = np.max(np.abs(resid[~on]) - e[~on], initial=0.0)
    res_on = np.max(np.abs(resid[on] + np.sign(lam[on]) * e[on]), initial=0.0)
    return max(res_off, res_on, 0.0)


def lasso_solve(problem, opts=None):
    """Weighted Lasso: minimize lam'G lam - 2 beta'lam + 2 sum eta_m |lam_m|.

    Cyclic coordinate descent; convergence requires both a small last sweep
    and KKT residuals below tolerance.  The KKT conditions imply the returned
    point satisfies the Dantzig constraint.
    """
    opts = opts or SolverOptions()
    G, b, e = problem.G, problem.beta_hat, problem.eta
    M = G.shape[0]
    lam = np.zeros(M)
    q = np.zeros(M)
    total_sweeps = 0
    while True:
        budget = opts.cd_max_sweeps - total_sweeps
        if budget <= 0:
            raise SolverError("Lasso coordinate descent hit the sweep limit "
                              "without satisfying KKT", status="MaxIter")
        sweeps, last_change = cd_sweeps(G, b, e, lam, q,
                                        min(budget, 2000),
                                        opts.cd_tol_change)
        total_sweeps += sweeps
        kkt = _kkt_residual(G, b, e, lam, q)
        if kkt <= opts.cd_tol_kkt and last_change <= opts.cd_tol_change:
            break

    vec = CoefficientVector.from_values(lam, "Lasso")
    objective = float(lam @ (G @ lam) - 2.0 * b @ lam
                      + 2.0 * e @ np.abs(lam))
    report = SolverReport(iterations=total_sweeps,
                          max_constraint_violation=
                          _constraint_violation(problem, lam),
                          objective=objective, status="Optimal",
                          duality_gap_or_kkt_residual=kkt)
    return vec, report


def two_step_refit(G, beta_hat, support, opts=None):
    """Least-squares refit on a fixed support: solve G_J lam_J = beta_J."""
    opts = opts or SolverOptions()
    if isinstance(G, GramMatrix):
        G = G.entries
    beta_hat = np.asarray(beta_hat, dtype=float)
    support = np.asarray(support, dtype=int)
    lam = np.zeros(beta_hat.shape[0])
    if support.size == 0:
        return CoefficientVector.from_values(lam, "DantzigLS")
    sub = G[np.ix_(support, support)]
    cond = float(np.linalg.cond(sub))
    if not np.isfinite(cond) or cond > opts.refit_max_cond:
        raise IllConditionedError(
            f"restricted Gram matrix condition number {cond:.3e} exceeds "
            f"{opts.refit_max_cond:.1e}", condition_number=cond)
    lam[support] = np.linalg.solve(sub, beta_hat[support])
    return CoefficientVector.from_values(lam, "DantzigLS")


def soft_threshold_estimate(beta_hat, eta):
    """Closed form shared by Dantzig and Lasso when G = I:
    lam_m = sign(beta_m) (|beta_m| - eta_m)_+."""
    beta_hat = np.asarray(beta_hat, dtype=float)
    eta = np.asarray(eta, dtype=float)
    lam = np.sign(beta_hat) * np.maximum(np.abs(beta_hat) - eta, 0.0)
    return CoefficientVector.from_values(lam, "SoftThreshold")
