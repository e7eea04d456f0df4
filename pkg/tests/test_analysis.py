import itertools

import numpy as np
import pytest

from sparsedensity.analysis import (check_assumptions, local_assumption_margin,
                                    oracle_bound_rhs, restricted_correlation,
                                    restricted_eigenvalues, structural_report)
from sparsedensity.errors import BudgetExceededError


def random_gram(M, seed, spread=2):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((spread * M, M))
    G = A.T @ A / (spread * M)
    d = np.sqrt(np.diag(G))
    return G / np.outer(d, d)


def brute_eigs(G, l):
    M = G.shape[0]
    mn, mx = np.inf, -np.inf
    for k in range(1, l + 1):
        for J in itertools.combinations(range(M), k):
            w = np.linalg.eigvalsh(G[np.ix_(J, J)])
            mn, mx = min(mn, w[0]), max(mx, w[-1])
    return mn, mx


def test_restricted_eigenvalues_identity():
    mn, mx = restricted_eigenvalues(np.eye(6), 3)
    assert mn == 1.0 and mx == 1.0


@pytest.mark.parametrize("seed", range(5))
def test_restricted_eigenvalues_match_brute(seed):
    G = random_gram(7, seed)
    for l in (1, 2, 3):
        mn, mx = restricted_eigenvalues(G, l)
        bmn, bmx = brute_eigs(G, l)
        assert abs(mn - bmn) < 1e-12 and abs(mx - bmx) < 1e-12


def test_restricted_eigenvalues_monotone_in_l():
    G = random_gram(8, 3)
    prev_mn, prev_mx = restricted_eigenvalues(G, 1)
    for l in (2, 3, 4):
        mn, mx = restricted_eigenvalues(G, l)
        assert mn <= prev_mn + 1e-14 and mx >= prev_mx - 1e-14
        prev_mn, prev_mx = mn, mx


def test_restricted_correlation_identity_is_zero():
    assert restricted_correlation(np.eye(6), 2, 3) == 0.0


def test_restricted_correlation_two_by_two():
    rho = 0.6
    G = np.array([[1.0, rho], [rho, 1.0]])
    assert abs(restricted_correlation(G, 1, 1) - rho) < 1e-14


def test_check_assumptions_identity():
    chk = check_assumptions(np.eye(8), 2, 2)
    assert chk.a1_holds and chk.kappa1 == 1.0 and chk.mu1 == 0.0
    # A2 at l = s is an equality, hence fails strictly
    assert not chk.a2_holds
    chk2 = check_assumptions(np.eye(8), 2, 4)
    assert chk2.a2_holds and chk2.kappa2 > 0.0


def test_check_assumptions_range_validation():
    with pytest.raises(ValueError):
        check_assumptions(np.eye(4), 3, 3)


def test_margin_nonnegative_under_a1():
    # when A1 holds, the margin is nonnegative for every lam (oracle: direct
    # randomized search for a counterexample must fail)
    rng = np.random.default_rng(0)
    G = random_gram(6, 5, spread=4)
    s = 1
    chk = check_assumptions(G, s, s)
    if not chk.a1_holds:
        pytest.skip("draw without A1")
    for _ in range(300):
        lam = rng.standard_normal(6)
        J0 = rng.choice(6, size=s, replace=False)
        m = local_assumption_margin(G, J0, lam, chk.kappa1, chk.mu1)
        assert m >= -1e-10


def test_margin_detects_bad_constants():
    # kappa far above the eigenvalue scale must produce a negative margin
    G = np.eye(4)
    lam = np.zeros(4)
    lam[0] = 1.0
    m = local_assumption_margin(G, np.array([0]), lam, kappa=5.0, mu=0.0)
    assert m < 0.0


def test_oracle_bound_rhs_reference_value():
    # beta=1, kappa=1, mu=0, lam = lam_hat supported on J0: Lambda = 0, so
    # rhs = bias^2 + 16 s (1/beta + 1/kappa^2) eta_inf^2
    lam = np.array([1.0, 0.0])
    rhs = oracle_bound_rhs(lam, np.array([0]), lam, eta_inf=0.5, kappa=1.0,
                           mu=0.0, beta=1.0, bias_sq=0.25)
    assert abs(rhs - (0.25 + 16.0 * 2.0 * 0.25)) < 1e-12


def test_oracle_bound_rhs_validation():
    lam = np.array([1.0])
    with pytest.raises(ValueError):
        oracle_bound_rhs(lam, np.array([0]), lam, 0.1, kappa=0.0, mu=0.0,
                         beta=1.0, bias_sq=0.0)


def test_structural_report_json():
    G = random_gram(6, 9)
    rep = structural_report(G, 4)
    text = rep.to_json()
    assert '"M": 6' in text and '"checks"' in text


def test_budget_guard():
    with pytest.raises(BudgetExceededError):
        restricted_eigenvalues(np.eye(60), 30)
