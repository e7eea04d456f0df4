"""Brute-force structural analysis of a Gram matrix.

Restricted eigenvalues phi_min(l)/phi_max(l), restricted correlations
theta_{l,l'}, the two sufficient assumptions with their (kappa, mu)
constants, the local lower-bound margin they imply, and the right-hand side
of the instance-level oracle bound.

Everything here enumerates subsets exhaustively, so an explicit combinatorial
budget (default 10^6 subsets) guards against accidental blow-ups.
"""

import json
from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from .dictionary import GramMatrix
from .errors import BudgetExceededError

SUBSET_BUDGET = 10 ** 6


def _entries(G):
    return G.entries if isinstance(G, GramMatrix) else np.asarray(G, dtype=float)


def _check_budget(count, what):
    if count > SUBSET_BUDGET:
        raise BudgetExceededError(
            f"{what} needs {count} subset evaluations "
            f"(budget {SUBSET_BUDGET})")


def restricted_eigenvalues(G, l):
    """(phi_min(l), phi_max(l)): extreme eigenvalues over all principal
    submatrices of size <= l."""
    A = _entries(G)
    M = A.shape[0]
    if not 1 <= l <= M:
        raise ValueError(f"need 1 <= l <= M, got l={l}, M={M}")
    _check_budget(sum(comb(M, k) for k in range(1, l + 1)),
                  f"restricted_eigenvalues(l={l})")
    phi_min = np.inf
    phi_max = -np.inf
    for k in range(1, l + 1):
        for J in combinations(range(M), k):
            idx = np.array(J)
            w = np.linalg.eigvalsh(A[np.ix_(idx, idx)])
            phi_min = min(phi_min, w[0])
            phi_max = max(phi_max, w[-1])
    return float(phi_min), float(phi_max)


def restricted_correlation(G, l, l_prime):
    """theta_{l,l'}: max spectral norm of off-diagonal blocks G_{J,J'} over
    disjoint subsets with |J| <= l, |J'| <= l'."""
    A = _entries(G)
    M = A.shape[0]
    if l + l_prime > M:
        raise ValueError(f"need l + l' <= M, got {l}+{l_prime} > {M}")
    count = sum(comb(M, a) * sum(comb(M - a, bb) for bb in range(1, l_prime + 1))
                for a in range(1, l + 1))
    _check_budget(count, f"restricted_correlation({l},{l_prime})")
    theta = 0.0
    for a in range(1, l + 1):
        for J in combinations(range(M), a):
            rest = [i for i in range(M) if i not in J]
            for bb in range(1, l_prime + 1):
                for Jp in combinations(rest, bb):
                    block = A[np.ix_(np.array(J), np.array(Jp))]
                    s = np.linalg.svd(block, compute_uv=False)[0]
                    theta = max(theta, float(s))
    return theta


@dataclass
class AssumptionCheck:
    s: int
    l: int
    a1_holds: bool
    a2_holds: bool
    kappa1: float
    mu1: float
    kappa2: float
    mu2: float


def check_assumptions(G, s, l):
    """Evaluate both structural assumptions at (s, l) with their constants.

    A1(s):   phi_min(2s) > theta_{s,2s}
    A2(s,l): l phi_min(s+l) > s phi_max(l)
    """
    A = _entries(G)
    M = A.shape[0]
    if not (1 <= s <= M / 2 and l >= s and s + l <= M):
        raise ValueError(f"parameters out of range: s={s}, l={l}, M={M}")

    phi_min_2s, _ = restricted_eigenvalues(A, 2 * s)
    theta = restricted_correlation(A, s, 2 * s)
    a1 = phi_min_2s > theta
    if phi_min_2s > 0.0:
        kappa1 = float(np.sqrt(phi_min_2s) * (1.0 - theta / phi_min_2s))
        mu1 = float(theta / np.sqrt(s * phi_min_2s))
    else:
        kappa1, mu1 = 0.0, np.inf

    phi_min_sl, _ = restricted_eigenvalues(A, s + l)
    _, phi_max_l = restricted_eigenvalues(A, l)
    a2 = l * phi_min_sl > s * phi_max_l
    if phi_min_sl > 0.0:
        kappa2 = float(np.sqrt(phi_min_sl)
                       * (1.0 - np.sqrt(s * phi_max_l / (l * phi_min_sl))))
    else:
        kappa2 = 0.0
    mu2 = float(np.sqrt(phi_max_l / l))
    return AssumptionCheck(s=s, l=l, a1_holds=bool(a1), a2_holds=bool(a2),
                           kappa1=kappa1, mu1=mu1, kappa2=kappa2, mu2=mu2)


def local_assumption_margin(G, J0, lam, kappa, mu):
    """||f_lam||_2 - kappa ||lam_J0||_2 + mu (||lam_J0c||_1 - ||lam_J0||_1)_+.

    Nonnegative exactly when the local lower bound holds at lam with the
    constants (kappa, mu).
    """
    A = _entries(G)
    lam = np.asarray(lam, dtype=float)
    J0 = np.asarray(J0, dtype=int)
    mask = np.zeros(lam.shape[0], dtype=bool)
    mask[J0] = True
    norm_f = float(np.sqrt(max(lam @ (A @ lam), 0.0)))
    l2_on = float(np.linalg.norm(lam[mask]))
    l1_on = float(np.sum(np.abs(lam[mask])))
    l1_off = float(np.sum(np.abs(lam[~mask])))
    return norm_f - kappa * l2_on + mu * max(l1_off - l1_on, 0.0)


def oracle_bound_rhs(lam, J0, lam_hat, eta_inf, kappa, mu, beta, bias_sq):
    """Right-hand side of the instance-level oracle inequality at lam.

    Lambda(lam, J0^c) = ||lam_{J0^c}||_1 + (||lam_hat||_1 - ||lam||_1)_+ / 2.
    """
    if beta <= 0.0 or kappa <= 0.0:
        raise ValueError("need beta > 0 and kappa > 0")
    lam = np.asarray(lam, dtype=float)
    lam_hat = np.asarray(lam_hat, dtype=float)
    J0 = np.asarray(J0, dtype=int)
    s = J0.shape[0]
    mask = np.zeros(lam.shape[0], dtype=bool)
    mask[J0] = True
    big_lambda = (np.sum(np.abs(lam[~mask]))
                  + max(np.sum(np.abs(lam_hat)) - np.sum(np.abs(lam)), 0.0) / 2.0)
    term_sparse = beta * big_lambda ** 2 / s * (1.0 + 2.0 * mu * np.sqrt(s) / kappa) ** 2
    term_var = 16.0 * s * (1.0 / beta + 1.0 / kappa ** 2) * eta_inf ** 2
    return float(bias_sq + term_sparse + term_var)


@dataclass
class StructuralReport:
    M: int
    l_max: int
    phi_min: dict
    phi_max: dict
    theta: dict
    checks: list

    def to_json(self):
        return json.dumps({
            "M": self.M,
            "l_max": self.l_max,
            "phi_min": {str(k): v for k, v in self.phi_min.items()},
            "phi_max": {str(k): v for k, v in self.phi_max.items()},
            "theta": {f"{k[0]},{k[1]}": v for k, v in self.theta.items()},
            "checks": [vars(c) for c in self.checks],
        }, indent=2)


def structural_report(G, l_max, pairs=None):
    """Full brute-force report up to subset size l_max.

    ``pairs`` is an iterable of (s, l) combinations to check; defaults to all
    admissible pairs with 2s <= l_max and s + l <= M.
    """
    A = _entries(G)
    M = A.shape[0]
    phi_min, phi_max, theta = {}, {}, {}
    for l in range(1, l_max + 1):
        phi_min[l], phi_max[l] = restricted_eigenvalues(A, l)
    if pairs is None:
        pairs = [(s, l) for s in range(1, M // 2 + 1)
                 for l in range(s, M - s + 1)
                 if 2 * s <= l_max and s + l <= l_max]
    checks = []
    for s, l in pairs:
        theta[(s, 2 * s)] = restricted_correlation(A, s, 2 * s)
        checks.append(check_assumptions(A, s, l))
    return StructuralReport(M=M, l_max=l_max, phi_min=phi_min,
                            phi_max=phi_max, theta=theta, checks=checks)
