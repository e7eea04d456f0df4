"""Analytically known densities on [0,1] with exact samplers and geometry.

The test densities are mixtures of elementary components (uniform pieces, a
triangle, a truncated Gaussian, a truncated two-sided exponential, a raised
cosine).  Each component exposes its pdf, cdf and inverse cdf, so mixtures
are sampled exactly: pick a component from the weights, then invert its cdf.

Note on the second component of ``f2``: it is implemented with a decaying
exponent exp(-20 |t - .67|) (two-sided exponential shape), normalized on
[0,1].
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad
from scipy.special import ndtr, ndtri

from .dictionary import gram

_TWO_PI = 2.0 * np.pi

DENSITY_IDS = ("uniform", "f1", "f2", "f3", "f4")


# ---------------------------------------------------------------------------
# mixture components
# ---------------------------------------------------------------------------

class UniformComp:
    """Uniform density on [a,b] inside [0,1]."""

    def __init__(self, a, b):
        self.a, self.b = a, b
        self.breakpoints = (a, b)

    def pdf(self, x):
        return np.where((x >= self.a) & (x <= self.b), 1.0 / (self.b - self.a), 0.0)

    def cdf(self, x):
        return np.clip((x - self.a) / (self.b - self.a), 0.0, 1.0)

    def ppf(self, u):
        return self.a + u * (self.b - self.a)


class TriangleComp:
    """Symmetric triangle on [0,1] with peak 2 at 1/2."""

    breakpoints = (0.5,)

    def pdf(self, x):
        return np.where(x <= 0.5, 4.0 * x, 4.0 * (1.0 - x))

    def cdf(self, x):
        return np.where(x <= 0.5, 2.0 * x * x, 1.0 - 2.0 * (1.0 - x) ** 2)

    def ppf(self, u):
        return np.where(u <= 0.5, np.sqrt(u / 2.0), 1.0 - np.sqrt((1.0 - u) / 2.0))


class TruncGaussComp:
    """Gaussian restricted and renormalized to [0,1]."""

    def __init__(self, mu, sigma):
        self.mu, self.sigma = mu, sigma
        self.lo = ndtr((0.0 - mu) / sigma)
        self.hi = ndtr((1.0 - mu) / sigma)
        self.mass = self.hi - self.lo
        self.breakpoints = (mu,)

    def pdf(self, x):
        z = (x - self.mu) / self.sigma
        return np.exp(-0.5 * z * z) / (self.sigma * np.sqrt(_TWO_PI) * self.mass)

    def cdf(self, x):
        return (ndtr((x - self.mu) / self.sigma) - self.lo) / self.mass

    def ppf(self, u):
        return self.mu + self.sigma * ndtri(self.lo + u * self.mass)


class TruncLaplaceComp:
    """exp(-rate |t - center|) restricted and renormalized to [0,1]."""

    def __init__(self, rate, center):
        self.rate, self.center = rate, center
        a = rate
        # integral of exp(-a|t-c|) over [0,1]
        self.mass = (2.0 - np.exp(-a * center) - np.exp(-a * (1.0 - center))) / a
        self.breakpoints = (center,)

    def pdf(self, x):
        return np.exp(-self.rate * np.abs(x - self.center)) / self.mass

    def _raw_cdf(self, x):
        # integral of exp(-a|t-c|) from 0 to x
        a, c = self.rate, self.center
        x = np.asarray(x, dtype=float)
        left = (np.exp(-a * (c - np.minimum(x, c))) - np.exp(-a * c)) / a
        right = np.where(x > c, (1.0 - np.exp(-a * (x - c))) / a, 0.0)
        return left + right

    def cdf(self, x):
        return self._raw_cdf(x) / self.mass

    def ppf(self, u):
        a, c = self.rate, self.center
        target = np.asarray(u, dtype=float) * self.mass
        at_c = (1.0 - np.exp(-a * c)) / a
        below = target <= at_c
        # left branch: target = (exp(-a(c-x)) - exp(-a c)) / a
        x_left = c + np.log(np.maximum(target * a + np.exp(-a * c), 1e-300)) / a
        # right branch: target - at_c = (1 - exp(-a(x-c))) / a
        x_right = c - np.log(np.maximum(1.0 - (target - at_c) * a, 1e-300)) / a
        return np.clip(np.where(below, x_left, x_right), 0.0, 1.0)


class CosineComp:
    """Raised cosine 1 + amp cos(2 pi t) on [0,1] (|amp| < 1)."""

    breakpoints = ()

    def __init__(self, amp=0.9):
        self.amp = amp

    def pdf(self, x):
        return 1.0 + self.amp * np.cos(_TWO_PI * x)

    def cdf(self, x):
        return x + self.amp * np.sin(_TWO_PI * x) / _TWO_PI

    def ppf(self, u, tol=1e-12, max_newton=64):
        u = np.atleast_1d(np.asarray(u, dtype=float))
        x = u.copy()  # cdf is close to the identity
        converged = np.zeros(u.shape, dtype=bool)
        for _ in range(max_newton):
            f = self.cdf(x) - u
            converged = np.abs(f) <= tol
            if converged.all():
                break
            x = np.clip(x - f / np.maximum(self.pdf(x), 1e-12), 0.0, 1.0)
        if not converged.all():
            # bisection fallback for points Newton failed to pin down
            bad = np.nonzero(~converged)[0]
            for i in bad:
                lo, hi = 0.0, 1.0
                for _ in range(200):
                    mid = 0.5 * (lo + hi)
                    if self.cdf(mid) < u[i]:
                        lo = mid
                    else:
                        hi = mid
                x[i] = 0.5 * (lo + hi)
        return x


# ---------------------------------------------------------------------------
# densities
# ---------------------------------------------------------------------------

@dataclass
class TrueDensity:
    id: str
    weights: np.ndarray
    components: tuple
    sup_norm: float
    l2_norm_sq: float


def _sup_norm(weights, components):
    # candidate extrema: component modes, support endpoints, dense grid
    xs = np.linspace(0.0, 1.0, 100001)
    vals = np.zeros(xs.shape)
    for w, comp in zip(weights, components):
        vals += w * comp.pdf(xs)
    return float(vals.max())


def _breakpoints(components):
    pts = {0.0, 1.0}
    for comp in components:
        pts.update(comp.breakpoints)
    return sorted(pts)


def _l2_norm_sq(weights, components):
    def f(x):
        return sum(w * comp.pdf(x) for w, comp in zip(weights, components)) ** 2

    pts = _breakpoints(components)
    total = 0.0
    for a, b in zip(pts[:-1], pts[1:]):
        val, _ = quad(f, a, b, epsabs=1e-10, epsrel=1e-10, limit=200)
        total += val
    return float(total)


@lru_cache(maxsize=None)
def get_density(density_id):
    density_id = density_id.lower()
    if density_id == "uniform":
        weights, comps = (1.0,), (UniformComp(0.0, 1.0),)
        return TrueDensity("uniform", np.array(weights), comps, 1.0, 1.0)
    if density_id == "f1":
        weights = (0.47, 0.53)
        comps = (TriangleComp(), UniformComp(0.5, 0.5 + 1.0 / 75.0))
    elif density_id == "f2":
        weights = (0.45, 0.55)
        comps = (TruncGaussComp(0.45, 0.125), TruncLaplaceComp(20.0, 0.67))
    elif density_id == "f3":
        weights = (0.25, 0.75)
        comps = (UniformComp(0.33, 0.47), UniformComp(0.64, 0.80))
    elif density_id == "f4":
        weights = (0.45, 0.55)
        comps = (CosineComp(0.9), UniformComp(0.64, 0.80))
    else:
        raise ValueError(f"unknown density {density_id!r}")
    w = np.array(weights)
    return TrueDensity(density_id, w, comps, _sup_norm(w, comps),
                       _l2_norm_sq(w, comps))


def density_eval(d, x):
    """Pointwise density value(s)."""
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape)
    for w, comp in zip(d.weights, d.components):
        out += w * comp.pdf(x)
    return out


def density_cdf(d, x):
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape)
    for w, comp in zip(d.weights, d.components):
        out += w * comp.cdf(x)
    return out


def sample(d, n, seed):
    """n i.i.d. draws: categorical component pick, then exact inverse cdf."""
    from .empirical import Sample

    rng = np.random.default_rng(seed)
    idx = rng.choice(len(d.components), size=n, p=d.weights)
    u = rng.random(n)
    out = np.empty(n)
    for i, comp in enumerate(d.components):
        mask = idx == i
        if mask.any():
            out[mask] = comp.ppf(u[mask])
    return Sample(values=np.clip(out, 0.0, 1.0), n=n, seed=seed)


# ---------------------------------------------------------------------------
# exact dictionary geometry
# ---------------------------------------------------------------------------

def _trig_moment(d, k, kind):
    """integral of f0(t) * trig(2 pi k t) dt via oscillatory quadrature on
    smooth pieces."""
    pts = _breakpoints(d.components)

    def f(x):
        return float(density_eval(d, np.atleast_1d(x))[0])

    total = 0.0
    for a, b in zip(pts[:-1], pts[1:]):
        val, _ = quad(f, a, b, weight=kind, wvar=_TWO_PI * k,
                      epsabs=1e-11, limit=400)
        total += val
    return total


def _interval_mass(d, a, b):
    return float(density_cdf(d, np.atleast_1d(b))[0]
                 - density_cdf(d, np.atleast_1d(a))[0])


_WAV_GRID_LEVEL = 18


def true_coefficients(d, dictionary):
    """Exact scalar products beta_0,m = <phi_m, f_0> for every member.

    Closed form (cdf differences) for piecewise-constant members, oscillatory
    quadrature for trigonometric members, high-resolution grid integration for
    the interpolated Daubechies members.
    """
    from .dictionary import member_values

    out = np.empty(dictionary.M)
    wav_grid = None
    for m, mem in enumerate(dictionary.members):
        tag = mem[0]
        if tag == "const":
            out[m] = 1.0
        elif tag == "cos":
            out[m] = np.sqrt(2.0) * _trig_moment(d, mem[1], "cos")
        elif tag == "sin":
            out[m] = np.sqrt(2.0) * _trig_moment(d, mem[1], "sin")
        elif tag == "bin":
            j0, k = mem[1], mem[2]
            out[m] = 2.0 ** (j0 / 2.0) * _interval_mass(d, k / 2.0 ** j0,
                                                        (k + 1) / 2.0 ** j0)
        elif tag == "haar":
            j, k = mem[1], mem[2]
            if j == -1:
                out[m] = 1.0
            else:
                a = k / 2.0 ** j
                b = (k + 1) / 2.0 ** j
                mid = 0.5 * (a + b)
                out[m] = 2.0 ** (j / 2.0) * (_interval_mass(d, a, mid)
                                             - _interval_mass(d, mid, b))
        else:  # wav
            if wav_grid is None:
                xs = np.linspace(0.0, 1.0, 2 ** _WAV_GRID_LEVEL + 1)
                fvals = density_eval(d, xs)
                wav_grid = (xs, fvals)
            xs, fvals = wav_grid
            out[m] = np.trapezoid(member_values(dictionary, m, xs) * fvals, xs)
    return out


_beta0_cache: dict = {}


def cached_true_coefficients(d, dictionary):
    key = (d.id, dictionary.kind, dictionary.n, dictionary.M)
    if key not in _beta0_cache:
        _beta0_cache[key] = true_coefficients(d, dictionary)
    return _beta0_cache[key]


def l2_risk(d, dictionary, lam):
    """||f_lam - f_0||_2^2 = lam'G lam - 2 lam'beta_0 + ||f_0||_2^2."""
    lam = np.asarray(getattr(lam, "values", lam), dtype=float)
    if lam.shape[0] != dictionary.M:
        raise ValueError("coefficient length does not match dictionary size")
    G = gram(dictionary).entries
    beta0 = cached_true_coefficients(d, dictionary)
    return float(lam @ (G @ lam) - 2.0 * lam @ beta0 + d.l2_norm_sq)
