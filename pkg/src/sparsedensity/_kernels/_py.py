"""Pure-numpy fallback for the coordinate-descent kernel."""

import numpy as np


def cd_sweeps(G, beta, eta, lam, q, max_sweeps, tol_change):
    """Run cyclic coordinate-descent sweeps for the weighted Lasso.

    Minimizes  lam' G lam - 2 beta' lam + 2 sum_m eta_m |lam_m|  by cycling
    over coordinates with the closed-form soft-threshold update.  ``lam`` and
    the correlation vector ``q = G @ lam`` are updated in place.

    Returns ``(sweeps_done, last_max_change)`` where ``sweeps_done`` is the
    number of full sweeps executed before the largest coordinate change in a
    sweep fell below ``tol_change`` (or ``max_sweeps`` was hit).
    """
    M = lam.shape[0]
    max_change = np.inf
    sweeps = 0
    while sweeps < max_sweeps and max_change > tol_change:
        max_change = 0.0
        for m in range(M):
            g_mm = G[m, m]
            z = beta[m] - (q[m] - g_mm * lam[m])
            new = np.sign(z) * max(abs(z) - eta[m], 0.0) / g_mm
            delta = new - lam[m]
            if delta != 0.0:
                q += G[m] * delta
                lam[m] = new
                if abs(delta) > max_change:
                    max_change = abs(delta)
        sweeps += 1
    return sweeps, max_change
