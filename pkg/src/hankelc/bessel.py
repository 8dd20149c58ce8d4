"""Gamma and Bessel-J evaluation plus the delta normalization constants.

Bessel functions of the first kind are evaluated by three methods glued
together by argument size:

* ascending power series for z <= 12, where alternation costs at most
  a couple of digits;
* backward (Miller-type) recurrence normalized with the even-order sum
  identity (1/2 z)^nu = sum_k (nu+2k) Gamma(nu+k)/k! J_{nu+2k}(z) in the
  middle range, where neither series converges cleanly in doubles;
* the large-argument cosine expansion once it can reach ~1e-13 before
  its terms start growing.

All entry points accept scalars or numpy arrays for z.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .errors import DomainError
from .multiindex import MultiIndex

__all__ = [
    "MuVector",
    "gamma_fn",
    "bessel_j",
    "reduced_bessel",
    "c_mu",
    "c_k_mu",
    "DEFAULT_Z_MAX",
]

DEFAULT_Z_MAX = 200.0

_SERIES_CUTOFF = 12.0
_GAMMA_MAX = 171.5


class MuVector(tuple):
    """Vector of Bessel orders, one per axis, each >= -1/2.

    Entries given as int, Fraction or "num/den" string are kept exact;
    floats stay floats.  Exact entries let the symbolic layer produce
    exact rational coefficients.
    """

    def __new__(cls, entries):
        vals = []
        for i, v in enumerate(entries):
            if isinstance(v, Fraction):
                w = v
            elif isinstance(v, int):
                w = Fraction(v)
            elif isinstance(v, str):
                try:
                    w = Fraction(v)
                except (ValueError, ZeroDivisionError) as exc:
                    raise DomainError(f"component {i}: bad rational {v!r}") from exc
            elif isinstance(v, float):
                w = v
            else:
                raise DomainError(f"component {i}: unsupported type {type(v)!r}")
            if w < Fraction(-1, 2):
                raise DomainError(f"component {i}: order {w} < -1/2")
            vals.append(w)
        if not vals:
            raise DomainError("an order vector needs at least one component")
        return super().__new__(cls, vals)

    @property
    def dim(self) -> int:
        return len(self)

    @property
    def is_rational(self) -> bool:
        return all(isinstance(v, Fraction) for v in self)

    def shifted(self, k) -> "MuVector":
        """The componentwise shift mu + k by a multi-index."""
        k = MultiIndex(k)
        if len(k) != len(self):
            raise DomainError(
                f"dimension mismatch: order vector {len(self)}, index {len(k)}"
            )
        return MuVector(tuple(m + int(v) for m, v in zip(self, k)))

    def to_json(self):
        return [str(v) if isinstance(v, Fraction) else v for v in self]

    @classmethod
    def from_json(cls, data) -> "MuVector":
        return cls(data)


# Lanczos approximation, g = 7 with 9 coefficients.  Good to ~1e-13
# relative on the positive axis; reflection is not needed here.
_LANCZOS_G = 7.0
_LANCZOS_C = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def gamma_fn(x) -> float:
    """Gamma(x) for real x > 0."""
    x = float(x)
    if x <= 0.0:
        raise DomainError(f"gamma needs a positive argument, got {x}")
    if x > _GAMMA_MAX:
        raise DomainError(f"gamma({x}) overflows double precision")
    z = x - 1.0
    acc = _LANCZOS_C[0]
    for i in range(1, len(_LANCZOS_C)):
        acc += _LANCZOS_C[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    if x < 100.0:
        return math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * math.exp(-t) * acc
    # large arguments: assemble in log space to dodge intermediate overflow
    return math.exp(
        0.5 * math.log(2.0 * math.pi) + (z + 0.5) * math.log(t) - t + math.log(acc)
    )


def _series_j(nu: float, z: np.ndarray) -> np.ndarray:
    """Ascending series; intended for z <= 12."""
    half = 0.5 * z
    with np.errstate(divide="ignore"):
        pref = half**nu / gamma_fn(nu + 1.0)
    ratio = -(half * half)
    term = np.ones_like(z)
    total = np.ones_like(z)
    for m in range(1, 80):
        term = term * ratio / (m * (nu + m))
        total += term
        if np.max(np.abs(term)) <= 1e-17 * max(np.max(np.abs(total)), 1e-300):
            break
    return pref * total


def _asymptotic_j(nu: float, z: np.ndarray) -> np.ndarray:
    """Large-argument cosine expansion, truncated at the smallest term."""
    mu4 = 4.0 * nu * nu
    inv8z = 1.0 / (8.0 * z)
    p = np.ones_like(z)
    q = np.zeros_like(z)
    term = np.ones_like(z)
    prev = math.inf
    for j in range(1, 40):
        term = term * (mu4 - (2 * j - 1) ** 2) * inv8z / j
        mag = float(np.max(np.abs(term)))
        if mag >= prev:
            break
        sign = -1.0 if (j // 2) % 2 else 1.0
        if j % 2:
            q += sign * term
        else:
            p += sign * term
        if mag <= 1e-17:
            break
        prev = mag
    omega = z - (0.5 * nu + 0.25) * math.pi
    return np.sqrt(2.0 / (math.pi * z)) * (p * np.cos(omega) - q * np.sin(omega))


def _miller_j(nu: float, z: np.ndarray) -> np.ndarray:
    """Backward recurrence with the even-order sum normalization."""
    zmax = float(np.max(z))
    m_start = int(math.ceil(zmax + 1.5 * math.sqrt(40.0 * zmax) + 40.0))
    if m_start % 2:
        m_start += 1
    two_over_z = 2.0 / z
    f_hi = np.zeros_like(z)              # order nu + m + 1
    f_cur = np.full_like(z, 1e-30)       # order nu + m
    norm = np.zeros_like(z)
    f_nu = None
    k = m_start // 2
    # w_k = (nu + 2k) Gamma(nu + k) / k!, updated downward as k decreases
    w = (nu + 2 * k) * math.exp(math.lgamma(nu + k) - math.lgamma(k + 1.0))
    for m in range(m_start, -1, -1):
        if m % 2 == 0:
            norm = norm + w * f_cur
            if m > 0:
                k = m // 2
                if k == 1:
                    w = gamma_fn(nu + 1.0)
                else:
                    w = w * (nu + 2 * k - 2) * k / ((nu + 2 * k) * (nu + k - 1))
        if m == 0:
            f_nu = f_cur
            break
        f_lo = (nu + m) * two_over_z * f_cur - f_hi
        f_hi, f_cur = f_cur, f_lo
        # rescale per entry: growth rates differ wildly across the array, and
        # a global rescale would underflow the slow-growing entries to zero
        mask = np.abs(f_cur) > 1e200
        if mask.any():
            f_cur[mask] *= 1e-200
            f_hi[mask] *= 1e-200
            norm[mask] *= 1e-200
    with np.errstate(over="ignore"):
        target = (0.5 * z) ** nu
    return f_nu * target / norm


def _asym_cutoff(nu: float) -> float:
    return max(30.0, 1.9 * nu * nu + 16.0)


def bessel_j(nu, z, z_max: float = DEFAULT_Z_MAX):
    """Bessel function of the first kind J_nu(z), real order nu >= -1/2.

    z may be a scalar or a numpy array with entries in [0, z_max].
    """
    nuf = float(nu)
    if nuf < -0.5:
        raise DomainError(f"order {nuf} < -1/2 not supported")
    arr = np.asarray(z, dtype=float)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    if arr.size == 0:
        return arr
    lo, hi = float(arr.min()), float(arr.max())
    if lo < 0.0:
        raise DomainError(f"argument {lo} < 0")
    if hi > z_max:
        raise DomainError(f"argument {hi} exceeds the configured cap {z_max}")
    out = np.empty_like(arr)
    small = arr <= _SERIES_CUTOFF
    large = arr >= _asym_cutoff(nuf)
    mid = ~(small | large)
    if small.any():
        out[small] = _series_j(nuf, arr[small])
    if large.any():
        out[large] = _asymptotic_j(nuf, arr[large])
    if mid.any():
        out[mid] = _miller_j(nuf, arr[mid])
    return float(out[0]) if scalar else out


def reduced_bessel(nu, z, z_max: float = DEFAULT_Z_MAX):
    """The even entire part z^(-nu) J_nu(z), finite down to z = 0.

    At z = 0 this equals 1 / (2^nu Gamma(nu+1)).
    """
    nuf = float(nu)
    if nuf < -0.5:
        raise DomainError(f"order {nuf} < -1/2 not supported")
    arr = np.asarray(z, dtype=float)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    if arr.size == 0:
        return arr
    lo, hi = float(arr.min()), float(arr.max())
    if lo < 0.0:
        raise DomainError(f"argument {lo} < 0")
    if hi > z_max:
        raise DomainError(f"argument {hi} exceeds the configured cap {z_max}")
    out = np.empty_like(arr)
    small = arr <= _SERIES_CUTOFF
    if small.any():
        zs = arr[small]
        pref = 2.0**-nuf / gamma_fn(nuf + 1.0)
        ratio = -0.25 * zs * zs
        term = np.ones_like(zs)
        total = np.ones_like(zs)
        for m in range(1, 80):
            term = term * ratio / (m * (nuf + m))
            total += term
            if np.max(np.abs(term)) <= 1e-17 * max(np.max(np.abs(total)), 1e-300):
                break
        out[small] = pref * total
    rest = ~small
    if rest.any():
        zr = arr[rest]
        out[rest] = bessel_j(nuf, zr, z_max=z_max) / zr**nuf
    return float(out[0]) if scalar else out


def c_mu(mu: MuVector) -> float:
    """Normalization constant prod_i 2^mu_i Gamma(mu_i + 1)."""
    mu = mu if isinstance(mu, MuVector) else MuVector(mu)
    out = 1.0
    for m in mu:
        out *= 2.0 ** float(m) * gamma_fn(float(m) + 1.0)
    return out


def c_k_mu(mu: MuVector, k):
    """Transform coefficient of the k-th delta derivative.

    Equals (-1)^|k| c_mu(mu) / c_mu(mu + k); the gamma ratio telescopes,
    so for rational mu the value is an exact Fraction.
    """
    mu = mu if isinstance(mu, MuVector) else MuVector(mu)
    k = MultiIndex(k)
    if len(k) != len(mu):
        raise DomainError(
            f"dimension mismatch: order vector {len(mu)}, index {len(k)}"
        )
    out = Fraction(-1 if k.order % 2 else 1)
    for m, ki in zip(mu, k):
        for r in range(1, ki + 1):
            out /= 2 * (m + r)
    return out
