"""Grids, quadrature, convolution and special functions shared by the chains.

Everything here works on plain numpy arrays wrapped in small frozen
dataclasses.  Grid data is integrated with the trapezoid rule; analytic
integrands over an interval use Gauss-Legendre.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.special import roots_legendre

__all__ = [
    "GridError",
    "Grid1D",
    "GridDensity1D",
    "PhaseSpaceDensity",
    "trapezoid_weights",
    "convolve",
    "shift_samples",
    "off_grid_mass",
    "bessel_i",
    "bessel_i_scaled",
    "gauss_legendre",
    "trapezoid_2d",
    "gaussian_density",
    "gaussian_wavefunction",
]

# switch point between the ascending series and the large-argument expansion
BESSEL_SERIES_MAX = 15.0


class GridError(ValueError):
    """Raised when grid data cannot support the requested operation."""


def _frozen(a, dtype=float):
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Grid1D:
    """Closed uniform lattice ``lo, lo + step, ..., hi`` with ``n`` samples."""

    lo: float
    hi: float
    n: int

    def __post_init__(self):
        if not self.lo < self.hi:
            raise GridError(f"need lo < hi, got lo={self.lo}, hi={self.hi}")
        if self.n < 2:
            raise GridError(f"need at least 2 samples, got n={self.n}")

    @classmethod
    def from_step(cls, lo, step, n):
        return cls(float(lo), float(lo + step * (n - 1)), int(n))

    @property
    def step(self) -> float:
        return (self.hi - self.lo) / (self.n - 1)

    @property
    def points(self) -> np.ndarray:
        return self.lo + self.step * np.arange(self.n)

    def same_step(self, other: "Grid1D", rtol=1e-12) -> bool:
        return math.isclose(self.step, other.step, rel_tol=rtol)


def trapezoid_weights(n: int, step: float) -> np.ndarray:
    w = np.full(n, step)
    w[0] = w[-1] = 0.5 * step
    return w


@dataclass(frozen=True)
class GridDensity1D:
    """Non-negative density sampled on a :class:`Grid1D`."""

    grid: Grid1D
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = _frozen(self.values)
        if v.shape != (self.grid.n,):
            raise GridError(f"values shape {v.shape} does not match grid size {self.grid.n}")
        if not np.all(np.isfinite(v)):
            raise GridError("density has non-finite samples")
        if np.any(v < 0):
            raise GridError("density has negative samples")
        object.__setattr__(self, "values", v)

    def mass(self) -> float:
        return float(trapezoid_weights(self.grid.n, self.grid.step) @ self.values)

    def moment(self, k: int = 1) -> float:
        w = trapezoid_weights(self.grid.n, self.grid.step)
        return float(w @ (self.values * self.grid.points**k))

    def mean(self) -> float:
        return self.moment(1) / self.mass()

    def variance(self) -> float:
        mu = self.mean()
        w = trapezoid_weights(self.grid.n, self.grid.step)
        return float(w @ (self.values * (self.grid.points - mu) ** 2)) / self.mass()

    def at(self, x) -> np.ndarray:
        """Linear interpolation, zero outside the grid."""
        return np.interp(x, self.grid.points, self.values, left=0.0, right=0.0)


@dataclass(frozen=True)
class PhaseSpaceDensity:
    """Non-negative density on a (position, momentum) product grid.

    ``values[i, j]`` is the density at ``(gridQ.points[i], gridP.points[j])``.
    """

    gridQ: Grid1D
    gridP: Grid1D
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = _frozen(self.values)
        if v.shape != (self.gridQ.n, self.gridP.n):
            raise GridError(f"values shape {v.shape} does not match grids "
                            f"({self.gridQ.n}, {self.gridP.n})")
        if not np.all(np.isfinite(v)) or np.any(v < 0):
            raise GridError("phase-space density must be finite and non-negative")
        object.__setattr__(self, "values", v)

    def mesh(self):
        return np.meshgrid(self.gridQ.points, self.gridP.points, indexing="ij")

    def mass(self) -> float:
        return trapezoid_2d(self, lambda x, y: np.ones_like(x))

    def marginal_position(self) -> GridDensity1D:
        wp = trapezoid_weights(self.gridP.n, self.gridP.step)
        return GridDensity1D(self.gridQ, self.values @ wp)

    def marginal_momentum(self) -> GridDensity1D:
        wq = trapezoid_weights(self.gridQ.n, self.gridQ.step)
        return GridDensity1D(self.gridP, wq @ self.values)


def convolve(f: GridDensity1D, F: GridDensity1D) -> GridDensity1D:
    """Density of the sum of two independent variables, ``(f * F)(x)``.

    Direct sum ``step * sum_i f_i F_{k-i}`` on the Minkowski-sum grid, so
    no mass is lost at the edges.  Both inputs must share the grid step.
    """
    if not f.grid.same_step(F.grid):
        raise GridError(
            f"grid steps differ ({f.grid.step!r} vs {F.grid.step!r}); resample onto a common step first"
        )
    h = f.grid.step
    out = Grid1D.from_step(f.grid.lo + F.grid.lo, h, f.grid.n + F.grid.n - 1)
    return GridDensity1D(out, h * np.convolve(f.values, F.values))


def off_grid_mass(values, step, shift) -> float:
    """Mass that a translation by ``shift`` would carry past either grid edge."""
    values = np.asarray(values)
    n = values.shape[0]
    k = int(math.ceil(abs(shift) / step - 1e-9))
    if k == 0:
        return 0.0
    k = min(k, n)
    band = np.abs(values[n - k:]) if shift > 0 else np.abs(values[:k])
    return float(step * band.sum())


def shift_samples(values, step, shift) -> np.ndarray:
    """Translate samples: returns ``g`` with ``g(x) = values(x - shift)``.

    Whole-step shifts are exact index offsets with zero fill.  Fractional
    shifts use band-limited (Fourier) interpolation, which assumes the
    samples decay to zero well inside both edges.
    """
    values = np.asarray(values)
    n = values.shape[0]
    k = shift / step
    kr = round(k)
    if abs(k - kr) < 1e-9:
        kr = int(kr)
        out = np.zeros_like(values)
        if abs(kr) >= n:
            return out
        if kr >= 0:
            out[kr:] = values[: n - kr]
        else:
            out[: n + kr] = values[-kr:]
        return out
    freqs = np.fft.fftfreq(n, d=step)
    phase = np.exp(-2j * np.pi * freqs * shift)
    out = np.fft.ifft(np.fft.fft(values) * phase)
    return out if np.iscomplexobj(values) else out.real


def _bessel_series(order, z):
    # sum_k (z/2)^(2k+n) / (k! (k+n)!)
    half = 0.5 * z
    term = half**order / math.factorial(order) * np.ones_like(z)
    total = term.copy()
    q = half * half
    for k in range(1, 200):
        term = term * q / (k * (k + order))
        total = total + term
        if np.all(term <= 1e-17 * total):
            break
    return total


def _bessel_asymptotic_scaled(order, z):
    # e^{-z} I_n(z) ~ (2 pi z)^{-1/2} sum_k (-1)^k a_k(n) / z^k, stopped at the smallest term
    mu = 4.0 * order * order
    total = np.ones_like(z)
    term = np.ones_like(z)
    active = np.ones(z.shape, dtype=bool)
    for k in range(1, 200):
        new = -term * (mu - (2 * k - 1) ** 2) / (k * 8.0 * z)
        growing = np.abs(new) >= np.abs(term)
        active &= ~growing
        if not active.any():
            break
        term = np.where(active, new, term)
        total = np.where(active, total + new, total)
        if np.all(~active | (np.abs(new) <= 1e-17 * np.abs(total))):
            break
    return total / np.sqrt(2.0 * np.pi * z)


def _check_order(order):
    if order not in (0, 1):
        raise ValueError(f"only orders 0 and 1 are supported, got {order!r}")


def bessel_i_scaled(order: int, z):
    """``exp(-z) * I_n(z)`` for ``n`` in {0, 1} and ``z >= 0``."""
    _check_order(order)
    z_arr = np.asarray(z, dtype=float)
    if np.any(z_arr < 0) or not np.all(np.isfinite(z_arr)):
        raise ValueError("bessel_i needs finite z >= 0")
    zz = np.atleast_1d(z_arr)
    out = np.empty_like(zz)
    small = zz <= BESSEL_SERIES_MAX
    if small.any():
        out[small] = np.exp(-zz[small]) * _bessel_series(order, zz[small])
    if (~small).any():
        out[~small] = _bessel_asymptotic_scaled(order, zz[~small])
    return out.reshape(z_arr.shape) if z_arr.ndim else float(out[0])


def bessel_i(order: int, z):
    """Modified Bessel function of the first kind, ``I_0`` or ``I_1``.

    Ascending series up to ``z = 15``; above that the scaled asymptotic
    expansion times ``exp(z)``.  Overflows to ``inf`` past ``z ~ 709``, use
    :func:`bessel_i_scaled` there.
    """
    _check_order(order)
    z_arr = np.asarray(z, dtype=float)
    if np.any(z_arr < 0) or not np.all(np.isfinite(z_arr)):
        raise ValueError("bessel_i needs finite z >= 0")
    zz = np.atleast_1d(z_arr)
    out = np.empty_like(zz)
    small = zz <= BESSEL_SERIES_MAX
    if small.any():
        out[small] = _bessel_series(order, zz[small])
    if (~small).any():
        with np.errstate(over="ignore"):
            out[~small] = np.exp(zz[~small]) * _bessel_asymptotic_scaled(order, zz[~small])
    return out.reshape(z_arr.shape) if z_arr.ndim else float(out[0])


def gauss_legendre(nodes: int, lo: float = -1.0, hi: float = 1.0):
    """Gauss-Legendre nodes and weights mapped to ``[lo, hi]``."""
    if nodes < 1:
        raise ValueError("need at least one node")
    x, w = roots_legendre(nodes)
    half = 0.5 * (hi - lo)
    return lo + half * (x + 1.0), half * w


def trapezoid_2d(
    density: PhaseSpaceDensity,
    integrand: Callable[[np.ndarray, np.ndarray], np.ndarray],
    singular: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None,
) -> float:
    """Trapezoid rule for ``integral density(x, y) * integrand(x, y) dx dy``.

    ``singular`` flags nodes (boolean mask) where the integrand is undefined;
    those nodes contribute zero.  Any other non-finite integrand value is an
    error.  Rows are reduced with ``math.fsum`` so the result does not depend
    on how the rows were produced.
    """
    X, Y = density.mesh()
    mask = np.zeros(X.shape, dtype=bool) if singular is None else np.asarray(singular(X, Y), dtype=bool)
    with np.errstate(invalid="ignore", divide="ignore"):
        g = np.asarray(integrand(X, Y), dtype=float)
    g = np.broadcast_to(g, X.shape)
    if not np.all(np.isfinite(g[~mask])):
        raise ValueError("integrand is non-finite at unflagged nodes")
    g = np.where(mask, 0.0, g)
    wq = trapezoid_weights(density.gridQ.n, density.gridQ.step)
    wp = trapezoid_weights(density.gridP.n, density.gridP.step)
    rows = (density.values * g) @ wp
    return math.fsum(wq * rows)


def gaussian_density(x, mean=0.0, sigma=1.0):
    x = np.asarray(x, dtype=float)
    return np.exp(-0.5 * ((x - mean) / sigma) ** 2) / (sigma * math.sqrt(2.0 * math.pi))


def gaussian_wavefunction(grid: Grid1D, center=0.0, sigma=0.1) -> np.ndarray:
    """Complex samples of a Gaussian wavefunction whose |.|^2 is N(center, sigma^2)."""
    return np.sqrt(gaussian_density(grid.points, center, sigma)).astype(complex)
