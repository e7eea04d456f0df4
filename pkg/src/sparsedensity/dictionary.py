"""Dictionaries of unit-L2-norm functions on [0,1] and their Gram matrices.

Six kinds are supported:

- ``fou``  : trigonometric system {1, sqrt(2) cos(2 pi k x), sqrt(2) sin(2 pi k x)},
             M = n + 1 members,
- ``hist`` : normalized histogram bins, sqrt(n)/2 <= M = 2^j0 < sqrt(n),
- ``haar`` : Haar wavelets, n/2 <= M = 2^j1 < n,
- ``wav``  : periodized Daubechies-6 wavelets, same sizing as ``haar``,
- ``mix``  : fou + hist,                M = n + 1 + 2^j0,
- ``mix2`` : fou + hist + Haar wavelets of resolution above 2^j0,
             M = n + 1 + 2^j1.

Members are described by small tuples: ("const",), ("cos", k), ("sin", k),
("bin", j0, k), ("haar", j, k), ("wav", j, k).  Evaluation is exact for all
families except the Daubechies wavelets, which are evaluated by the cascade
refinement on a dyadic grid (2^16 points per unit) with linear interpolation.
"""

import os
import struct
import zlib
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .errors import DictionaryError, QuadratureError

ORTHONORMAL_KINDS = ("fou", "hist", "haar", "wav")
KINDS = ORTHONORMAL_KINDS + ("mix", "mix2")

_SQRT2 = np.sqrt(2.0)
_TWO_PI = 2.0 * np.pi


@dataclass
class GramMatrix:
    """Symmetric matrix of pairwise L2 inner products, unit diagonal."""

    M: int
    entries: np.ndarray


@dataclass
class Dictionary:
    kind: str
    n: int
    M: int
    members: tuple
    sup_norms: np.ndarray
    l2_norms: np.ndarray
    _gram: GramMatrix | None = field(default=None, repr=False, compare=False)


# ---------------------------------------------------------------------------
# Daubechies-6 machinery (db3 filter: 6 taps, 3 vanishing moments)
# ---------------------------------------------------------------------------

# Orthonormal low-pass filter in closed form, normalized so sum(h) = sqrt(2).
_S10 = np.sqrt(10.0)
_A6 = np.sqrt(5.0 + 2.0 * _S10)
_DB3_H = (np.sqrt(2.0) / 32.0) * np.array([
    1.0 + _S10 + _A6,
    5.0 + _S10 + 3.0 * _A6,
    10.0 - 2.0 * _S10 + 2.0 * _A6,
    10.0 - 2.0 * _S10 - 2.0 * _A6,
    5.0 + _S10 - 3.0 * _A6,
    1.0 + _S10 - _A6,
])
# High-pass filter g_k = (-1)^k h_{5-k}; psi(x) = sqrt(2) sum_k g_k phi(2x - k).
_DB3_G = np.array([(-1.0) ** k * _DB3_H[5 - k] for k in range(6)])

_CASCADE_LEVEL = 16
_psi_grid_cache: dict[int, np.ndarray] = {}


def _cascade_phi(level):
    """Daubechies-6 scaling function on [0,5] at resolution 2^-level."""
    h = _DB3_H
    # Values at the integers: eigenvector (eigenvalue 1) of the refinement
    # matrix restricted to the interior points 1..4; phi(0) = phi(5) = 0.
    T = np.zeros((4, 4))
    for i in range(1, 5):
        for j in range(1, 5):
            k = 2 * i - j
            if 0 <= k <= 5:
                T[i - 1, j - 1] = np.sqrt(2.0) * h[k]
    w, v = np.linalg.eig(T)
    idx = int(np.argmin(np.abs(w - 1.0)))
    vals = np.real(v[:, idx])
    vals /= vals.sum()  # partition of unity at the integers
    phi = np.zeros(6)
    phi[1:5] = vals
    # Dyadic refinement: phi(i/2^L) = sqrt(2) sum_k h_k phi((i - k 2^(L-1)) / 2^(L-1)).
    for L in range(1, level + 1):
        step = 2 ** (L - 1)
        size = 5 * 2 ** L + 1
        new = np.zeros(size)
        idxs = np.arange(size)
        for k in range(6):
            src = idxs - k * step
            ok = (src >= 0) & (src < phi.shape[0])
            new[ok] += np.sqrt(2.0) * h[k] * phi[src[ok]]
        phi = new
    return phi


def _psi_grid(level=_CASCADE_LEVEL):
    """Daubechies-6 mother wavelet on [0,5] at resolution 2^-level."""
    if level not in _psi_grid_cache:
        phi = _cascade_phi(level)
        size = 5 * 2 ** level + 1
        idxs = np.arange(size)
        psi = np.zeros(size)
        for k in range(6):
            src = 2 * idxs - k * 2 ** level
            ok = (src >= 0) & (src < phi.shape[0])
            psi[ok] += np.sqrt(2.0) * _DB3_G[k] * phi[src[ok]]
        _psi_grid_cache[level] = psi
    return _psi_grid_cache[level]


def _psi(args):
    """Linear interpolation of the mother wavelet; zero outside [0,5]."""
    grid = _psi_grid()
    scale = 2 ** _CASCADE_LEVEL
    pos = np.asarray(args, dtype=float) * scale
    out = np.zeros(pos.shape)
    inside = (pos >= 0.0) & (pos <= 5.0 * scale)
    p = pos[inside]
    i0 = np.floor(p).astype(np.int64)
    i0 = np.minimum(i0, grid.shape[0] - 2)
    frac = p - i0
    out[inside] = grid[i0] * (1.0 - frac) + grid[i0 + 1] * frac
    return out


def _periodized_wavelet(j, k, xs):
    """2^{j/2} sum_l psi(2^j x - k + l 2^j) on [0,1]."""
    xs = np.asarray(xs, dtype=float)
    t0 = (2.0 ** j) * xs - k
    l_lo = int(np.floor((0.0 - t0.max()) / 2.0 ** j))
    l_hi = int(np.ceil((5.0 - t0.min()) / 2.0 ** j))
    out = np.zeros(xs.shape)
    for l in range(l_lo, l_hi + 1):
        out += _psi(t0 + l * 2.0 ** j)
    return 2.0 ** (j / 2.0) * out


# ---------------------------------------------------------------------------
# Sizing and construction
# ---------------------------------------------------------------------------

def _largest_pow2_in(lo, hi):
    """Largest power of two p with lo <= p < hi, or None."""
    if hi <= 1:
        return None
    j = int(np.floor(np.log2(hi)))
    while j >= 0 and 2 ** j >= hi:
        j -= 1
    if j < 0 or 2 ** j < lo:
        return None
    return 2 ** j


def hist_resolution(n):
    """Number of bins 2^j0 with sqrt(n)/2 <= 2^j0 < sqrt(n)."""
    m = _largest_pow2_in(np.sqrt(n) / 2.0, np.sqrt(n))
    if m is None:
        raise DictionaryError(f"no power of two in [sqrt(n)/2, sqrt(n)) for n={n}")
    return m


def wavelet_resolution(n):
    """Member count 2^j1 with n/2 <= 2^j1 < n (shared by haar and wav)."""
    m = _largest_pow2_in(n / 2.0, float(n))
    if m is None:
        raise DictionaryError(f"no power of two in [n/2, n) for n={n}")
    return m


def _fourier_members(n):
    members = [("const",)]
    for k in range(1, (n + 1) // 2 + 1):
        members.append(("cos", k))
    for k in range(1, n // 2 + 1):
        members.append(("sin", k))
    return members


def _hist_members(j0_bins):
    j0 = int(np.log2(j0_bins))
    return [("bin", j0, k) for k in range(j0_bins)]


def _haar_members(m_count, include_const=True, min_level=0):
    j1 = int(np.log2(m_count))
    members = [("haar", -1, 0)] if include_const else []
    for j in range(min_level, j1):
        for k in range(2 ** j):
            members.append(("haar", j, k))
    return members


def _wav_members(m_count):
    j1 = int(np.log2(m_count))
    members = [("const",)]
    for j in range(j1):
        for k in range(2 ** j):
            members.append(("wav", j, k))
    return members


def _member_sup_norm(member):
    tag = member[0]
    if tag == "const":
        return 1.0
    if tag in ("cos", "sin"):
        return _SQRT2
    if tag == "bin":
        return 2.0 ** (member[1] / 2.0)
    if tag == "haar":
        j = member[1]
        return 1.0 if j == -1 else 2.0 ** (j / 2.0)
    if tag == "wav":
        j = member[1]
        xs = np.linspace(0.0, 1.0, 2 ** 14 + 1)
        return float(np.max(np.abs(_periodized_wavelet(j, 0, xs))))
    raise DictionaryError(f"unknown member {member!r}")


_wav_sup_cache: dict[int, float] = {}


def _sup_norms(members):
    out = np.empty(len(members))
    for i, mem in enumerate(members):
        if mem[0] == "wav":
            j = mem[1]
            if j not in _wav_sup_cache:
                _wav_sup_cache[j] = _member_sup_norm(mem)
            out[i] = _wav_sup_cache[j]
        else:
            out[i] = _member_sup_norm(mem)
    return out


def build_dictionary(kind, n):
    """Construct one of the six dictionaries for sample size ``n``.

    Deterministic given (kind, n).  Raises DictionaryError for unknown kinds
    or when n < 16.
    """
    kind = str(kind).lower()
    if kind not in KINDS:
        raise DictionaryError(f"unsupported dictionary kind {kind!r}")
    if n < 16:
        raise DictionaryError(f"n={n} too small (need n >= 16)")

    if kind == "fou":
        members = _fourier_members(n)
    elif kind == "hist":
        members = _hist_members(hist_resolution(n))
    elif kind == "haar":
        members = _haar_members(wavelet_resolution(n))
    elif kind == "wav":
        members = _wav_members(wavelet_resolution(n))
    elif kind == "mix":
        members = _fourier_members(n) + _hist_members(hist_resolution(n))
    else:  # mix2
        bins = hist_resolution(n)
        j0 = int(np.log2(bins))
        m_haar = wavelet_resolution(n)
        members = (_fourier_members(n) + _hist_members(bins)
                   + _haar_members(m_haar, include_const=False, min_level=j0))

    members = tuple(members)
    sup = _sup_norms(members)
    l2 = np.ones(len(members))
    return Dictionary(kind=kind, n=n, M=len(members), members=members,
                      sup_norms=sup, l2_norms=l2)


def haar_system(num_levels):
    """Haar dictionary with the constant plus levels 0..num_levels-1.

    Used by the calibration study where the member count equals the sample
    size (2^{j0+1} = n).
    """
    members = tuple(_haar_members(2 ** num_levels))
    return Dictionary(kind="haar", n=2 ** num_levels, M=len(members),
                      members=members, sup_norms=_sup_norms(members),
                      l2_norms=np.ones(len(members)))


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

def member_values(d, m, xs):
    """Evaluate member ``m`` of the dictionary at points ``xs`` in [0,1]."""
    xs = np.asarray(xs, dtype=float)
    if np.any((xs < 0.0) | (xs > 1.0)):
        raise ValueError("evaluation points must lie in [0,1]")
    if not 0 <= m < d.M:
        raise IndexError(f"member index {m} out of range (M={d.M})")
    mem = d.members[m]
    tag = mem[0]
    if tag == "const":
        return np.ones(xs.shape)
    if tag == "cos":
        return _SQRT2 * np.cos(_TWO_PI * mem[1] * xs)
    if tag == "sin":
        return _SQRT2 * np.sin(_TWO_PI * mem[1] * xs)
    if tag == "bin":
        j0, k = mem[1], mem[2]
        a = k / 2.0 ** j0
        b = (k + 1) / 2.0 ** j0
        inside = (xs >= a) & (xs < b) if k < 2 ** j0 - 1 else (xs >= a) & (xs <= b)
        return 2.0 ** (j0 / 2.0) * inside.astype(float)
    if tag == "haar":
        j, k = mem[1], mem[2]
        if j == -1:
            return np.ones(xs.shape)
        t = xs * 2.0 ** j - k
        out = np.zeros(xs.shape)
        out[(t >= 0.0) & (t < 0.5)] = 1.0
        out[(t >= 0.5) & (t <= 1.0)] = -1.0
        return 2.0 ** (j / 2.0) * out
    if tag == "wav":
        return _periodized_wavelet(mem[1], mem[2], xs)
    raise DictionaryError(f"unknown member {mem!r}")


def evaluate(d, m, x):
    """Pointwise member evaluation (scalar convenience wrapper)."""
    return float(member_values(d, m, np.atleast_1d(float(x)))[0])


def design_matrix(d, xs):
    """Matrix of member values, shape (len(xs), M)."""
    xs = np.asarray(xs, dtype=float)
    out = np.empty((xs.shape[0], d.M))
    for m in range(d.M):
        out[:, m] = member_values(d, m, xs)
    return out


def synthesize(d, lam, xs):
    """Pointwise values of f_lambda = sum_m lambda_m phi_m."""
    lam = np.asarray(lam, dtype=float)
    if lam.shape[0] != d.M:
        raise ValueError(f"coefficient length {lam.shape[0]} != M={d.M}")
    xs = np.asarray(xs, dtype=float)
    out = np.zeros(xs.shape)
    for m in np.nonzero(lam)[0]:
        out += lam[m] * member_values(d, m, xs)
    return out


# ---------------------------------------------------------------------------
# Gram matrix
# ---------------------------------------------------------------------------

def _trig_interval_integral(mem, a, b):
    """Integral of a Fourier member over [a,b]."""
    tag = mem[0]
    if tag == "const":
        return b - a
    k = mem[1]
    w = _TWO_PI * k
    if tag == "cos":
        return _SQRT2 * (np.sin(w * b) - np.sin(w * a)) / w
    return _SQRT2 * (np.cos(w * a) - np.cos(w * b)) / w


def _cross_entry(mem_a, mem_b):
    """Closed-form inner product for pairs from {fourier} x {bin, haar}."""
    if mem_a[0] in ("bin", "haar"):
        mem_a, mem_b = mem_b, mem_a
    if mem_b[0] == "bin":
        j0, k = mem_b[1], mem_b[2]
        a, b = k / 2.0 ** j0, (k + 1) / 2.0 ** j0
        return 2.0 ** (j0 / 2.0) * _trig_interval_integral(mem_a, a, b)
    j, k = mem_b[1], mem_b[2]
    if j == -1:
        return _trig_interval_integral(mem_a, 0.0, 1.0)
    a, b = k / 2.0 ** j, (k + 1) / 2.0 ** j
    mid = 0.5 * (a + b)
    return 2.0 ** (j / 2.0) * (_trig_interval_integral(mem_a, a, mid)
                               - _trig_interval_integral(mem_a, mid, b))


def gram_entry_quadrature(d, m1, m2, tol=1e-9):
    """Adaptive-quadrature inner product of two members (test oracle and
    fallback for pairs involving Daubechies members)."""
    def f(x):
        return (member_values(d, m1, np.atleast_1d(x))[0]
                * member_values(d, m2, np.atleast_1d(x))[0])

    pts = sorted(set(np.linspace(0.0, 1.0, 257)))
    val, err = quad(f, 0.0, 1.0, points=pts, limit=400, epsabs=tol)
    if err > 100 * max(tol, 1e-12):
        raise QuadratureError(
            f"quadrature did not converge for member pair ({m1}, {m2}): "
            f"estimated error {err:.2e}")
    return val


def _build_gram_entries(d):
    if d.kind in ORTHONORMAL_KINDS:
        # Orthonormality holds analytically for each of these families.
        return np.eye(d.M)
    entries = np.eye(d.M)
    groups = {}
    for i, mem in enumerate(d.members):
        tag = "fou" if mem[0] in ("const", "cos", "sin") else mem[0]
        groups.setdefault(tag, []).append(i)
    fou = groups.get("fou", [])
    bins = groups.get("bin", [])
    haars = groups.get("haar", [])
    for i in fou:
        for jdx in bins + haars:
            v = _cross_entry(d.members[i], d.members[jdx])
            entries[i, jdx] = v
            entries[jdx, i] = v
    # bin x haar pairs in mix2 are orthogonal: each included Haar member is
    # supported inside a single bin, where the wavelet integrates to zero.
    return entries


def gram(d, cache_dir=None):
    """Gram matrix of the dictionary; cached on the instance and optionally
    on disk (keyed by kind and n)."""
    if d._gram is not None:
        return d._gram
    entries = None
    path = None
    if cache_dir is not None:
        path = os.path.join(cache_dir, f"gram_{d.kind}_{d.n}.bin")
        loaded = load_gram_cache(path)
        if loaded is not None and loaded[0] == d.kind and loaded[1] == d.n \
                and loaded[2].shape == (d.M, d.M):
            entries = loaded[2]
    if entries is None:
        entries = _build_gram_entries(d)
        if path is not None:
            os.makedirs(cache_dir, exist_ok=True)
            save_gram_cache(path, d.kind, d.n, entries)
    d._gram = GramMatrix(M=d.M, entries=entries)
    return d._gram


# ---------------------------------------------------------------------------
# Binary Gram cache (versioned, checksummed)
# ---------------------------------------------------------------------------

_GRAM_MAGIC = b"SDGC"
_GRAM_VERSION = 1


def save_gram_cache(path, kind, n, entries):
    payload = np.ascontiguousarray(entries, dtype=np.float64).tobytes()
    kind_b = kind.encode()
    header = struct.pack("<4sHB", _GRAM_MAGIC, _GRAM_VERSION, len(kind_b))
    header += kind_b
    header += struct.pack("<IIQ", int(n), entries.shape[0], len(payload))
    header += struct.pack("<I", zlib.crc32(payload))
    with open(path, "wb") as fh:
        fh.write(header + payload)


def load_gram_cache(path):
    """Return (kind, n, entries) or None on any mismatch or corruption."""
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
        magic, version, klen = struct.unpack_from("<4sHB", raw, 0)
        if magic != _GRAM_MAGIC or version != _GRAM_VERSION:
            return None
        off = 7
        kind = raw[off:off + klen].decode()
        off += klen
        n, M, plen = struct.unpack_from("<IIQ", raw, off)
        off += 16
        (crc,) = struct.unpack_from("<I", raw, off)
        off += 4
        payload = raw[off:off + plen]
        if len(payload) != plen or zlib.crc32(payload) != crc:
            return None
        entries = np.frombuffer(payload, dtype=np.float64).reshape(M, M).copy()
        return kind, n, entries
    except (OSError, struct.error, ValueError):
        return None
