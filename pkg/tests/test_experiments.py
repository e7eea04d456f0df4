import numpy as np
import pytest

from sparsedensity.densities import get_density, sample
from sparsedensity.dictionary import haar_system
from sparsedensity.empirical import compute_stats
from sparsedensity.errors import ConfigError
from sparsedensity.experiments import (ExperimentConfig, boxplot_stats,
                                       calibration_sweep, haar_moment_arrays,
                                       result_rows, run_experiment,
                                       soft_threshold_uniform_risk)
from sparsedensity.solvers import soft_threshold_estimate


def test_config_validation():
    with pytest.raises(ConfigError):
        ExperimentConfig(gamma=0.0).validate()
    with pytest.raises(ConfigError):
        ExperimentConfig(method="ridge").validate()
    with pytest.raises(ConfigError):
        ExperimentConfig(replications=0).validate()


def test_config_digest_stable():
    a = ExperimentConfig(density="f1", n=100, seed=3)
    b = ExperimentConfig(density="f1", n=100, seed=3)
    assert a.digest() == b.digest()
    assert a.digest() != ExperimentConfig(density="f1", n=100, seed=4).digest()


def test_boxplot_stats_manual():
    vals = [1.0, 2.0, 3.0, 4.0, 100.0]
    s = boxplot_stats(vals)
    assert s["median"] == 3.0 and s["min"] == 1.0 and s["max"] == 100.0
    assert s["q1"] == 2.0 and s["q3"] == 4.0
    # 100 lies outside q3 + 1.5 IQR = 7, so the upper whisker stops at 4
    assert s["whisker_hi"] == 4.0 and s["whisker_lo"] == 1.0
    assert s["count"] == 5


def test_boxplot_stats_ignores_nan():
    s = boxplot_stats([1.0, float("nan"), 3.0])
    assert s["count"] == 2 and s["mean"] == 2.0


def test_run_experiment_deterministic():
    cfg = ExperimentConfig(density="f3", dictionary="hist", n=64,
                           method="lasso", replications=4, seed=11)
    r1 = run_experiment(cfg)
    r2 = run_experiment(ExperimentConfig(density="f3", dictionary="hist",
                                         n=64, method="lasso",
                                         replications=4, seed=11))
    assert r1.replications == r2.replications


def test_run_experiment_per_replication_seeds():
    cfg = ExperimentConfig(density="uniform", dictionary="hist", n=32,
                           method="dantzig", replications=3, seed=100)
    r = run_experiment(cfg)
    assert [rec["seed"] for rec in r.replications] == [100, 101, 102]
    risks = r.risks()
    assert len(set(np.round(risks, 12))) > 1  # seeds actually differ


def test_threads_match_serial():
    base = dict(density="f3", dictionary="hist", n=64, method="dantzig",
                replications=4, seed=5)
    serial = run_experiment(ExperimentConfig(**base, threads=1))
    parallel = run_experiment(ExperimentConfig(**base, threads=2))
    assert serial.replications == parallel.replications


def test_methods_dispatch():
    for method in ("dantzig", "lasso", "dantzig-nonadaptive", "dantzig-ls",
                   "soft-threshold"):
        cfg = ExperimentConfig(density="uniform", dictionary="haar", n=32,
                               method=method, replications=1, seed=0)
        r = run_experiment(cfg)
        assert np.isfinite(r.replications[0]["risk"]), method


def test_soft_threshold_requires_orthonormal():
    cfg = ExperimentConfig(density="uniform", dictionary="mix", n=32,
                           method="soft-threshold", replications=1, seed=0)
    r = run_experiment(cfg)
    assert r.replications[0]["status"] != "Optimal"
    assert np.isnan(r.replications[0]["risk"])


def test_result_rows_schema():
    cfg = ExperimentConfig(density="f4", dictionary="hist", n=32,
                           method="dantzig", replications=2, seed=1)
    rows = result_rows(run_experiment(cfg))
    assert len(rows) == 2
    for key in ("config_digest", "density", "risk", "support_size",
                "l1_norm", "status", "seed"):
        assert key in rows[0]


# -- calibration fast path ----------------------------------------------------

def test_haar_moments_match_generic_pipeline():
    J = 6
    n = 2 ** J
    d = haar_system(J)
    dens = get_density("uniform")
    rng = np.random.default_rng([0, J, 0])
    xs = np.sort(rng.random(n))
    from sparsedensity.empirical import make_sample
    stats = compute_stats(make_sample(xs), d, 1.01)
    beta, m2, sup = haar_moment_arrays(xs, J)
    assert np.allclose(beta, stats.beta_hat, atol=1e-12)
    assert np.allclose(sup, d.sup_norms, atol=1e-12)
    risks = soft_threshold_uniform_risk(beta, m2, sup, n, [1.01])
    # the study thresholds with the raw variance estimate, not the
    # inflated one used by the estimation pipelines
    eta = (np.sqrt(2.0 * stats.sigma_hat_sq * 1.01 * np.log(d.M) / n)
           + 2.0 * d.sup_norms * 1.01 * np.log(d.M) / (3.0 * n))
    lam = soft_threshold_estimate(stats.beta_hat, eta).values
    target = np.zeros(d.M)
    target[0] = 1.0
    assert abs(risks[0] - np.sum((lam - target) ** 2)) < 1e-12


def test_calibration_risk_ordering_at_n_1024():
    # undersized gamma hurts: at n = 2^10 the mean risk at gamma = 0.5
    # exceeds the mean risk at gamma = 1.01
    rows, _ = calibration_sweep([0.5, 1.01], [10], reps=200, seed=1)
    risk = {r["gamma"]: r["mean_risk"] for r in rows}
    assert risk[0.5] > risk[1.01]


def test_calibration_sweep_shape_and_determinism():
    rows1, gm1 = calibration_sweep([0.5, 1.0], [5, 6], reps=3, seed=9)
    rows2, gm2 = calibration_sweep([0.5, 1.0], [5, 6], reps=3, seed=9)
    assert rows1 == rows2 and gm1 == gm2
    assert len(rows1) == 4
    assert all(np.isfinite(r["mean_risk"]) for r in rows1)
    assert set(gm1) == {5, 6}
