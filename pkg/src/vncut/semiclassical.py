"""First apparatus dequantised after it has interacted with the spin.

The rotated coherent state is replaced by its Wigner function, which is a
positive Gaussian and can serve as a Liouville density.  The second pointer
is then pushed classically by ``C = q / sqrt(q^2 + p^2)``.  The mean shift is
available from a 2-d quadrature over the Wigner function and in closed form
through ``I_0`` and ``I_1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import __version__
from .hilbert import s_factor
from .linear_chain import ChainResult
from .numerics import (
    Grid1D,
    GridDensity1D,
    GridError,
    PhaseSpaceDensity,
    bessel_i_scaled,
    off_grid_mass,
    trapezoid_2d,
    trapezoid_weights,
)

__all__ = [
    "SingularInputError",
    "WignerCoherent",
    "phase_space_grid",
    "wigner_density",
    "classical_cosine",
    "mean_shift_semiclassical_quadrature",
    "mean_shift_semiclassical_closed",
    "semiclassical_factor",
    "semiclassical_q_distribution",
    "conjugate_momentum_pc",
    "DampingCurve",
    "damping_curve",
    "poisson_bracket",
]

DEFAULT_PHASE_POINTS = 512


class SingularInputError(ValueError):
    pass


@dataclass(frozen=True)
class WignerCoherent:
    """Wigner function of the coherent state ``|r e^{i mu}>`` (hbar = 1)."""

    r: float
    mu: float

    def __post_init__(self):
        if not math.isfinite(self.r) or self.r < 0:
            raise ValueError(f"r must be finite and >= 0, got {self.r}")

    @property
    def center_q(self) -> float:
        return math.sqrt(2.0) * self.r * math.cos(self.mu)

    @property
    def center_p(self) -> float:
        return math.sqrt(2.0) * self.r * math.sin(self.mu)

    def __call__(self, q, p):
        return np.exp(-((q - self.center_q) ** 2) - (p - self.center_p) ** 2) / math.pi


def phase_space_grid(r: float, n: int = DEFAULT_PHASE_POINTS) -> Grid1D:
    """Square axis ``[-(6 + sqrt2 r), 6 + sqrt2 r]``, wide enough for any phase ``mu``."""
    half = 6.0 + math.sqrt(2.0) * r
    return Grid1D(-half, half, n)


def wigner_density(r: float, mu: float, n: int = DEFAULT_PHASE_POINTS) -> PhaseSpaceDensity:
    W = WignerCoherent(r, mu)
    g = phase_space_grid(r, n)
    q, p = np.meshgrid(g.points, g.points, indexing="ij")
    values = W(q, p)
    # a coherent state's Wigner function is strictly positive; underflow to 0 is the only exception
    assert np.all(values >= 0)
    return PhaseSpaceDensity(g, g, values)


def classical_cosine(q, p):
    """``cos(theta) = q / sqrt(q^2 + p^2)``; the origin maps to NaN."""
    rho = np.hypot(q, p)
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(rho > 0, q / np.where(rho > 0, rho, 1.0), np.nan)


def _at_origin(q, p):
    return (q == 0) & (p == 0)


def mean_shift_semiclassical_quadrature(r: float, mu: float, n: int = DEFAULT_PHASE_POINTS) -> float:
    """``int int W(q, p) q / sqrt(q^2 + p^2) dq dp`` on an ``n x n`` trapezoid grid."""
    return trapezoid_2d(wigner_density(r, mu, n), classical_cosine, singular=_at_origin)


def semiclassical_factor(r) -> float | np.ndarray:
    """``sqrt(pi/2) r e^{-r^2} [I_0(r^2) + I_1(r^2)]``: tends to ``r sqrt(pi/2)`` then to 1."""
    r_arr = np.asarray(r, dtype=float)
    if not np.all(np.isfinite(r_arr)) or np.any(r_arr < 0):
        raise ValueError("r must be finite and >= 0")
    z = r_arr * r_arr
    out = math.sqrt(math.pi / 2.0) * r_arr * (bessel_i_scaled(0, z) + bessel_i_scaled(1, z))
    return float(out) if r_arr.ndim == 0 else out


def mean_shift_semiclassical_closed(r: float, mu: float) -> float:
    return math.cos(mu) * semiclassical_factor(r)


DAMPING_FORMULAS = {
    "quantum": "S(r) = e^{-r^2} sum_n r^{2n+1} / sqrt(n! (n+1)!)",
    "semiclassical": "sqrt(pi/2) r e^{-r^2} [I0(r^2) + I1(r^2)]",
}


@dataclass(frozen=True)
class DampingCurve:
    """Mean-shift factor tabulated against ``r``, with where it came from."""

    kind: str
    r: np.ndarray
    values: np.ndarray
    provenance: dict

    def __post_init__(self):
        if self.kind not in DAMPING_FORMULAS:
            raise ValueError(f"kind must be one of {sorted(DAMPING_FORMULAS)}, got {self.kind!r}")
        for name in ("r", "values"):
            a = np.array(getattr(self, name), dtype=float)
            a.setflags(write=False)
            object.__setattr__(self, name, a)
        if self.r.shape != self.values.shape:
            raise ValueError("r and values must have the same shape")


def damping_curve(kind: str, r) -> DampingCurve:
    """``S(r)`` (``kind="quantum"``) or the Bessel factor (``"semiclassical"``) at each ``r``."""
    r = np.asarray(r, dtype=float)
    if kind == "quantum":
        values = np.array([s_factor(x) for x in r])
    elif kind == "semiclassical":
        values = np.asarray(semiclassical_factor(r), dtype=float)
    else:
        raise ValueError(f"unknown damping curve {kind!r}")
    provenance = {"formula": DAMPING_FORMULAS[kind], "library": f"vncut {__version__}"}
    return DampingCurve(kind, r, values, provenance)


def _deposit(values, weights, lo, step, n):
    # linear (cloud-in-cell) deposition: keeps total weight and first moment exact
    x = (values - lo) / step
    i = np.clip(np.floor(x).astype(int), 0, n - 2)
    frac = x - i
    out = np.bincount(i, weights * (1.0 - frac), minlength=n)
    out += np.bincount(i + 1, weights * frac, minlength=n)
    return out


def semiclassical_q_distribution(r: float, mu: float, F: GridDensity1D,
                                 n: int = DEFAULT_PHASE_POINTS, c_points: int = 1025) -> ChainResult:
    """Distribution of ``Q`` after the classical push ``Q -> Q + C(q, p)``.

    ``rho(Q) = int int W(q, p) F(Q - C(q, p)) dq dp``.  The law of ``C`` under
    ``W`` is deposited on ``c_points`` lattice points in ``[-1, 1]`` and
    applied to ``F`` as a Fourier multiplier on ``F``'s grid.
    """
    h = F.grid.step
    for edge in (-1.0, 1.0):
        lost = off_grid_mass(F.values, h, edge)
        if lost > 1e-12:
            raise GridError(f"shifts up to {edge:+} push mass {lost:.3g} off the Q grid")
    W = wigner_density(r, mu, n)
    q, p = W.mesh()
    c = classical_cosine(q, p)
    wq = trapezoid_weights(W.gridQ.n, W.gridQ.step)
    cell = np.outer(wq, trapezoid_weights(W.gridP.n, W.gridP.step)) * W.values
    ok = np.isfinite(c)
    lattice = Grid1D(-1.0, 1.0, c_points)
    law = _deposit(c[ok], cell[ok], lattice.lo, lattice.step, lattice.n)

    nF = F.grid.n
    freqs = np.fft.rfftfreq(nF, d=h)
    char = np.exp(-2j * np.pi * np.multiply.outer(freqs, lattice.points)) @ law
    values = np.fft.irfft(np.fft.rfft(F.values) * char, n=nF)
    # Fourier interpolation leaves round-off sized negative ripples
    values = np.maximum(values, 0.0)
    return ChainResult.from_density(GridDensity1D(F.grid, values), "semiclassical")


def conjugate_momentum_pc(q: float, p: float) -> float:
    """Momentum conjugate to ``C``: ``(p^2 + q^2)^{3/2} / (2 p)``."""
    if p == 0:
        raise SingularInputError("p_C is singular on the p = 0 axis")
    return (p * p + q * q) ** 1.5 / (2.0 * p)


def poisson_bracket(f, g, q: float, p: float, step: float = 1e-5) -> float:
    """``df/dq dg/dp - df/dp dg/dq`` by central differences."""
    def d(fn, dq, dp):
        return (fn(q + dq, p + dp) - fn(q - dq, p - dp)) / (2.0 * step)

    return d(f, step, 0) * d(g, 0, step) - d(f, 0, step) * d(g, step, 0)
