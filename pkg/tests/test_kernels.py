import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sparsedensity._kernels import KERNEL_BACKEND, cd_sweeps, cd_sweeps_py


def make_problem(M, seed):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((2 * M, M))
    G = A.T @ A / (2 * M)
    d = np.sqrt(np.diag(G))
    G = np.ascontiguousarray(G / np.outer(d, d))
    b = rng.standard_normal(M) * 0.3
    e = rng.uniform(0.02, 0.2, size=M)
    return G, b, e


def run(kernel, G, b, e, sweeps=2000):
    lam = np.zeros(G.shape[0])
    q = np.zeros(G.shape[0])
    done, change = kernel(G, b, e, lam, q, sweeps, 1e-12)
    return lam, q, done, change


def test_backend_selected():
    assert KERNEL_BACKEND in ("cython", "python")


@pytest.mark.parametrize("seed", range(10))
def test_kernels_agree(seed):
    G, b, e = make_problem(15, seed)
    lam_c, q_c, s_c, _ = run(cd_sweeps, G, b, e)
    lam_p, q_p, s_p, _ = run(cd_sweeps_py, G, b, e)
    assert s_c == s_p
    assert np.allclose(lam_c, lam_p, atol=1e-12)
    assert np.allclose(q_c, q_p, atol=1e-12)


def test_q_is_g_lam():
    G, b, e = make_problem(10, 99)
    lam, q, _, _ = run(cd_sweeps, G, b, e)
    assert np.allclose(q, G @ lam, atol=1e-10)


def test_identity_gram_gives_soft_threshold():
    M = 8
    rng = np.random.default_rng(1)
    b = rng.standard_normal(M)
    e = rng.uniform(0.05, 0.3, size=M)
    lam, _, _, _ = run(cd_sweeps, np.eye(M), b, e)
    expect = np.sign(b) * np.maximum(np.abs(b) - e, 0.0)
    assert np.allclose(lam, expect, atol=1e-12)


def test_objective_never_increases():
    G, b, e = make_problem(12, 5)

    def obj(lam):
        return lam @ (G @ lam) - 2.0 * b @ lam + 2.0 * e @ np.abs(lam)

    lam = np.zeros(12)
    q = np.zeros(12)
    prev = obj(lam)
    for _ in range(30):
        cd_sweeps(G, b, e, lam, q, 1, 0.0)
        cur = obj(lam)
        assert cur <= prev + 1e-12
        prev = cur


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=2, max_value=20),
       st.integers(min_value=0, max_value=10 ** 6))
def test_kernels_agree_property(M, seed):
    G, b, e = make_problem(M, seed)
    lam_c, _, s_c, c_c = run(cd_sweeps, G, b, e, sweeps=500)
    lam_p, _, s_p, c_p = run(cd_sweeps_py, G, b, e, sweeps=500)
    assert s_c == s_p
    assert np.allclose(lam_c, lam_p, atol=1e-11)
