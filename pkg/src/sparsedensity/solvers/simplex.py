"""Self-contained dense two-phase simplex with Bland's rule.

Solves  min c'x  subject to  A x <= b,  x >= 0  (b of arbitrary sign) and
returns the primal solution together with the constraint duals (sensitivities
of the optimum to b, nonpositive for a minimization with <= constraints).

Bland's smallest-index rule guarantees termination; this solver targets the
small instances used for verification (the large Dantzig programs go through
HiGHS by default).
"""

import numpy as np

from ..errors import SolverError

_TOL = 1e-9


def _pivot(T, basis, row, col):
    T[row] /= T[row, col]
    for r in range(T.shape[0]):
        if r != row and T[r, col] != 0.0:
            T[r] -= T[r, col] * T[row]
    basis[row] = col


def _bland_iterate(T, basis, allowed, max_iter):
    """Run Bland-rule pivots on tableau T (last row = reduced costs,
    last column = rhs).  Returns the iteration count."""
    m = T.shape[0] - 1
    it = 0
    while True:
        r = T[-1, :-1]
        enter = -1
        for j in allowed:
            if r[j] < -_TOL:
                enter = j
                break
        if enter < 0:
            return it
        if it >= max_iter:
            raise SolverError("simplex iteration limit reached",
                              status="MaxIter")
        # ratio test, ties broken by smallest basis index (Bland)
        best = -1
        best_ratio = np.inf
        for i in range(m):
            a = T[i, enter]
            if a > _TOL:
                ratio = T[i, -1] / a
                if (ratio < best_ratio - _TOL
                        or (ratio < best_ratio + _TOL
                            and (best < 0 or basis[i] < basis[best]))):
                    best = i
                    best_ratio = ratio
        if best < 0:
            raise SolverError("LP is unbounded", status="Infeasible")
        _pivot(T, basis, best, enter)
        it += 1


def solve_lp(c, A, b, max_iter=100000):
    """Two-phase dense simplex for  min c'x, A x <= b, x >= 0.

    Returns (x, duals, objective, iterations).  Raises SolverError with
    status "Infeasible" or "MaxIter".
    """
    c = np.asarray(c, dtype=float)
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    m, n = A.shape

    flip = np.where(b < 0.0, -1.0, 1.0)
    Aeq = np.hstack([A * flip[:, None], np.diag(flip)])  # columns: x, slacks
    beq = b * flip
    n_tot = n + m

    art_rows = np.nonzero(flip < 0.0)[0]
    n_art = art_rows.shape[0]
    basis = np.empty(m, dtype=int)
    basis[:] = n + np.arange(m)  # slack basis where possible
    art_cols = {}
    if n_art:
        A_art = np.zeros((m, n_art))
        for idx, row in enumerate(art_rows):
            A_art[row, idx] = 1.0
            basis[row] = n_tot + idx
            art_cols[row] = n_tot + idx
        Aeq = np.hstack([Aeq, A_art])

    total_cols = Aeq.shape[1]
    T = np.zeros((m + 1, total_cols + 1))
    T[:m, :total_cols] = Aeq
    T[:m, -1] = beq
    iterations = 0

    if n_art:
        # phase 1: minimize the sum of artificials
        T[-1, :] = 0.0
        for row in art_rows:
            T[-1, :] -= T[row, :]
        T[-1, n_tot:total_cols] = 0.0
        allowed = list(range(total_cols))
        iterations += _bland_iterate(T, basis, allowed, max_iter)
        if T[-1, -1] < -1e-7:
            raise SolverError("LP infeasible (phase 1 objective > 0)",
                              status="Infeasible")
        # pivot remaining artificials out of the basis where possible
        for i in range(m):
            if basis[i] >= n_tot:
                for j in range(n_tot):
                    if abs(T[i, j]) > _TOL:
                        _pivot(T, basis, i, j)
                        iterations += 1
                        break

    # phase 2
    T[-1, :] = 0.0
    T[-1, :n] = c
    for i in range(m):
        if basis[i] < n and c[basis[i]] != 0.0:
            T[-1, :] -= c[basis[i]] * T[i, :]
    allowed = list(range(n_tot))
    iterations += _bland_iterate(T, basis, allowed, max_iter)

    x = np.zeros(n_tot if not n_art else total_cols)
    for i in range(m):
        x[basis[i]] = T[i, -1]
    primal = x[:n]
    objective = float(c @ primal)

    # duals from the final basis of the (flipped) equality system
    Bmat = np.zeros((m, m))
    cB = np.zeros(m)
    for i, j in enumerate(int(j) for j in basis):
        Bmat[:, i] = Aeq[:, j]
        cB[i] = c[j] if j < n else 0.0
    try:
        y_flip = np.linalg.solve(Bmat.T, cB)
    except np.linalg.LinAlgError:
        y_flip = np.linalg.lstsq(Bmat.T, cB, rcond=None)[0]
    duals = flip * y_flip
    return primal, duals, objective, iterations
