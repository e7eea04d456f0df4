"""Empirical coefficient and variance estimates with data-driven thresholds.

For a dictionary member phi_m and a sample X_1..X_n:

- beta_hat_m   = mean of phi_m(X_i),
- sigma_hat_m^2  = pairwise U-statistic estimate of Var(phi_m(X)),
  computed in O(n) via (n/(n-1)) (mean phi_m^2 - beta_hat_m^2),
- sigma_tilde_m^2 inflates sigma_hat_m^2 to control large deviations,
- eta_m combines a Bernstein-shaped random term and a deterministic term.

Natural logarithms are used for log M throughout.
"""

import json
from dataclasses import dataclass

import numpy as np

from .dictionary import design_matrix


@dataclass
class Sample:
    values: np.ndarray
    n: int
    seed: int | None = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 1 or self.values.shape[0] != self.n:
            raise ValueError("values must be a vector of length n")
        if self.n < 2:
            raise ValueError("need n >= 2 (variance estimates require pairs)")
        if np.any((self.values < 0.0) | (self.values > 1.0)):
            raise ValueError("sample values must lie in [0,1]")


def make_sample(values, seed=None):
    values = np.asarray(values, dtype=float)
    return Sample(values=values, n=values.shape[0], seed=seed)


def beta_hat(sample, d):
    """Empirical scalar products (1/n) sum_i phi_m(X_i), all m."""
    return design_matrix(d, sample.values).mean(axis=0)


def sigma_hat_sq_from_moments(m2, b, n):
    """(n/(n-1)) (m2 - b^2), clamped at 0 against round-off."""
    return np.maximum(n / (n - 1.0) * (m2 - b * b), 0.0)


def sigma_hat_sq(sample, d, m):
    """Unbiased variance estimate for member m, O(n) one-pass identity."""
    from .dictionary import member_values

    vals = member_values(d, m, sample.values)
    b = vals.mean()
    m2 = (vals * vals).mean()
    return float(sigma_hat_sq_from_moments(m2, b, sample.n))


def sigma_hat_sq_pairwise(sample, d, m):
    """O(n^2) pairwise reference: (1/(n(n-1))) sum_{i<j} (phi(X_i)-phi(X_j))^2."""
    from .dictionary import member_values

    vals = member_values(d, m, sample.values)
    diffs = vals[:, None] - vals[None, :]
    n = sample.n
    return float(np.sum(diffs * diffs) / (2.0 * n * (n - 1.0)))


def sigma_tilde_sq(sig_hat_sq, sup_norm, gamma, M, n):
    """Inflated variance estimate used inside the thresholds."""
    log_m = np.log(M)
    return (sig_hat_sq
            + 2.0 * sup_norm * np.sqrt(2.0 * sig_hat_sq * gamma * log_m / n)
            + 8.0 * sup_norm ** 2 * gamma * log_m / n)


def eta(sig_tilde_sq, sup_norm, gamma, M, n):
    """Per-member Dantzig threshold eta_{gamma,m}."""
    log_m = np.log(M)
    return (np.sqrt(2.0 * sig_tilde_sq * gamma * log_m / n)
            + 2.0 * sup_norm * gamma * log_m / (3.0 * n))


def non_adaptive_eta(f0_sup, sup_norm, gamma, M, n):
    """Threshold with the inflated variance replaced by ||f_0||_inf."""
    return eta(f0_sup, sup_norm, gamma, M, n)


def eta_envelopes(sigma0_sq, sup_norm, gamma, M, n):
    """Deterministic envelopes (eta_minus, eta_plus) around eta_{gamma,m};
    requires the true variance (test harness only)."""
    log_m = np.log(M)
    sigma0 = np.sqrt(sigma0_sq)
    lo = (sigma0 * np.sqrt(8.0 * gamma * log_m / (7.0 * n))
          + 2.0 * sup_norm * gamma * log_m / (3.0 * n))
    hi = (sigma0 * np.sqrt(16.0 * gamma * log_m / n)
          + 10.0 * sup_norm * gamma * log_m / n)
    return lo, hi


@dataclass
class EmpiricalStats:
    beta_hat: np.ndarray
    sigma_hat_sq: np.ndarray
    sigma_tilde_sq: np.ndarray
    eta: np.ndarray
    gamma: float
    log_M: float

    def to_json(self):
        return json.dumps({
            "gamma": self.gamma,
            "log_M": self.log_M,
            "beta_hat": self.beta_hat.tolist(),
            "sigma_hat_sq": self.sigma_hat_sq.tolist(),
            "sigma_tilde_sq": self.sigma_tilde_sq.tolist(),
            "eta": self.eta.tolist(),
        })

    @classmethod
    def from_json(cls, text):
        obj = json.loads(text)
        return cls(beta_hat=np.array(obj["beta_hat"]),
                   sigma_hat_sq=np.array(obj["sigma_hat_sq"]),
                   sigma_tilde_sq=np.array(obj["sigma_tilde_sq"]),
                   eta=np.array(obj["eta"]),
                   gamma=obj["gamma"], log_M=obj["log_M"])


def compute_stats(sample, d, gamma):
    """Full per-member pipeline beta_hat -> sigma_hat^2 -> sigma_tilde^2 -> eta."""
    phi = design_matrix(d, sample.values)
    return stats_from_design(phi, d.sup_norms, d.M, sample.n, gamma)


def stats_from_design(phi, sup_norms, M, n, gamma):
    b = phi.mean(axis=0)
    m2 = (phi * phi).mean(axis=0)
    s2 = sigma_hat_sq_from_moments(m2, b, n)
    st2 = sigma_tilde_sq(s2, sup_norms, gamma, M, n)
    e = eta(st2, sup_norms, gamma, M, n)
    return EmpiricalStats(beta_hat=b, sigma_hat_sq=s2, sigma_tilde_sq=st2,
                          eta=e, gamma=gamma, log_M=float(np.log(M)))
