"""Spin measured by a linear pointer, which is in turn read by a second pointer.

Two routes to the final distribution of the second pointer ``Q``:

* :func:`quantum_chain` keeps both pointers quantum.  It builds the joint
  amplitude ``a_m phi(q - m) Phi(Q - q)`` after the two shift couplings,
  squares it and traces out the spin and ``q``.
* :func:`classical_cut_chain` treats the first pointer's distribution ``f``
  as a classical density and lets the pointers interact classically,
  ``f(q) F(Q) -> f(q) F(Q - q)``, i.e. a convolution.

Because the first pointer's position is a Weyl-Wigner operator the two
routes agree.  :func:`liouville_joint_evolution` shows that the classical
step is a genuine canonical flow, for any momentum profiles.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .numerics import (
    Grid1D,
    GridDensity1D,
    GridError,
    PhaseSpaceDensity,
    convolve,
    gaussian_wavefunction,
    off_grid_mass,
    shift_samples,
    trapezoid_weights,
)

__all__ = [
    "OFF_GRID_TOL",
    "default_pointer_grid",
    "SpinState",
    "PointerState",
    "ChainResult",
    "first_pointer_distribution",
    "quantum_chain",
    "classical_cut_chain",
    "liouville_joint_evolution",
    "liouville_momentum_marginal",
    "mass_conservation_check",
]

OFF_GRID_TOL = 1e-12
# rows of the joint (q, Q) amplitude materialised at once
_ROW_BLOCK = 256

Method = Literal["quantum", "classical-cut", "elementary", "semiclassical"]


def default_pointer_grid() -> Grid1D:
    """``[-16, 16]`` with step 1/64, so every half-integer spin shift is a whole number of steps."""
    return Grid1D(-16.0, 16.0, 2049)


@dataclass(frozen=True)
class SpinState:
    """Spin-``j`` state ``sum_m a_m |m>`` with ``amps`` ordered ``m = j, j-1, ..., -j``."""

    j: float
    amps: np.ndarray = field(repr=False)

    def __post_init__(self):
        twoj = 2 * self.j
        if self.j < 0 or abs(twoj - round(twoj)) > 1e-12:
            raise ValueError(f"j must be a non-negative half-integer, got {self.j}")
        a = np.array(self.amps, dtype=complex).ravel()
        if a.size != int(round(twoj)) + 1:
            raise ValueError(f"spin {self.j} needs {int(round(twoj)) + 1} amplitudes, got {a.size}")
        if abs(np.sum(np.abs(a) ** 2) - 1.0) > 1e-12:
            raise ValueError("spin amplitudes must be normalised")
        a.setflags(write=False)
        object.__setattr__(self, "j", float(self.j))
        object.__setattr__(self, "amps", a)

    @classmethod
    def normalized(cls, j, amps):
        a = np.asarray(amps, dtype=complex)
        return cls(j, a / np.linalg.norm(a))

    @classmethod
    def eigenstate(cls, j, m):
        ms = j - np.arange(int(round(2 * j)) + 1)
        a = np.isclose(ms, m).astype(complex)
        if a.sum() != 1:
            raise ValueError(f"m={m} is not a J_z eigenvalue for j={j}")
        return cls(j, a)

    @property
    def m_values(self) -> np.ndarray:
        return self.j - np.arange(self.amps.size)

    @property
    def weights(self) -> np.ndarray:
        return np.abs(self.amps) ** 2


@dataclass(frozen=True)
class PointerState:
    """Pointer wavefunction sampled on a grid, unit L2 norm."""

    grid: Grid1D
    wavefunction: np.ndarray = field(repr=False)

    def __post_init__(self):
        psi = np.array(self.wavefunction, dtype=complex)
        if psi.shape != (self.grid.n,):
            raise GridError("wavefunction does not match its grid")
        norm = trapezoid_weights(self.grid.n, self.grid.step) @ np.abs(psi) ** 2
        if abs(norm - 1.0) > 1e-10:
            raise ValueError(f"pointer wavefunction must have unit norm, got {norm!r}")
        psi.setflags(write=False)
        object.__setattr__(self, "wavefunction", psi)

    @classmethod
    def gaussian(cls, sigma=0.1, center=0.0, grid: Grid1D | None = None):
        """Gaussian pointer whose position density is N(center, sigma^2).

        Samples are rescaled to unit discrete norm, which matters only when
        the grid barely resolves ``sigma``.
        """
        grid = default_pointer_grid() if grid is None else grid
        psi = gaussian_wavefunction(grid, center, sigma)
        norm = trapezoid_weights(grid.n, grid.step) @ np.abs(psi) ** 2
        return cls(grid, psi / np.sqrt(norm))

    def density(self) -> GridDensity1D:
        return GridDensity1D(self.grid, np.abs(self.wavefunction) ** 2)

    def translated(self, delta: float) -> "PointerState":
        """Same samples on a grid moved by ``delta``."""
        g = self.grid
        return PointerState(Grid1D(g.lo + delta, g.hi + delta, g.n), self.wavefunction)


@dataclass(frozen=True)
class ChainResult:
    distribution: GridDensity1D
    mean: float
    method: Method

    @classmethod
    def from_density(cls, density: GridDensity1D, method: Method):
        return cls(density, density.moment(1) / density.mass(), method)

    def mass(self) -> float:
        return self.distribution.mass()


def _shifted_pointer(phi: PointerState, m: float) -> np.ndarray:
    h = phi.grid.step
    lost = off_grid_mass(np.abs(phi.wavefunction) ** 2, h, m)
    if lost > OFF_GRID_TOL:
        raise GridError(f"shift by {m} pushes mass {lost:.3g} off the pointer grid; widen it")
    return shift_samples(phi.wavefunction, h, m)


def first_pointer_distribution(spin: SpinState, phi: PointerState) -> GridDensity1D:
    """``f(q) = sum_m |a_m|^2 |phi(q - m)|^2`` on ``phi``'s grid."""
    f = np.zeros(phi.grid.n)
    for m, w in zip(spin.m_values, spin.weights):
        if w == 0.0:
            continue
        f += w * np.abs(_shifted_pointer(phi, m)) ** 2
    return GridDensity1D(phi.grid, f)


def quantum_chain(spin: SpinState, phi: PointerState, Phi: PointerState, check_tol=1e-9) -> ChainResult:
    """Both pointers quantum; returns the distribution of ``Q``.

    The output grid is the Minkowski sum of the ``q`` and ``Q`` grids, so
    ``Phi(Q - q)`` is an exact index offset.  The result is compared with
    the classical convolution and a :class:`RuntimeError` is raised if they
    differ by more than ``check_tol`` in sup-norm.
    """
    gq, gQ = phi.grid, Phi.grid
    if not gq.same_step(gQ):
        raise GridError("q and Q grids must share a step")
    h = gq.step
    nq, nQ = gq.n, gQ.n
    out_grid = Grid1D.from_step(gq.lo + gQ.lo, h, nq + nQ - 1)
    nout = out_grid.n

    # toeplitz[i, k] = Phi[k - i], zero outside Phi's support
    padded = np.concatenate([np.zeros(nq - 1, complex), Phi.wavefunction, np.zeros(nq - 1, complex)])
    toeplitz = sliding_window_view(padded, nout)[::-1]

    density = np.zeros(nout)
    for a_m, m in zip(spin.amps, spin.m_values):
        if a_m == 0:
            continue
        phi_m = a_m * _shifted_pointer(phi, m)
        for i0 in range(0, nq, _ROW_BLOCK):
            i1 = min(i0 + _ROW_BLOCK, nq)
            psi2 = phi_m[i0:i1, None] * toeplitz[i0:i1]
            density += h * np.sum(np.abs(psi2) ** 2, axis=0)

    dist = GridDensity1D(out_grid, density)
    reference = convolve(first_pointer_distribution(spin, phi), Phi.density())
    gap = float(np.max(np.abs(reference.values - dist.values)))
    if gap > check_tol:
        raise RuntimeError(f"quantum chain disagrees with its convolution form by {gap:.3g}")
    return ChainResult.from_density(dist, "quantum")


def classical_cut_chain(f: GridDensity1D, F: GridDensity1D) -> ChainResult:
    """First pointer already classical: ``f(q) F(Q) -> f(q) F(Q - q)``, marginalised over ``q``."""
    return ChainResult.from_density(convolve(f, F), "classical-cut")


def _momentum_window_sums(L1: PhaseSpaceDensity, shifts) -> np.ndarray:
    # g[:, j] = sum_p h_p L1(q, p + P_j) over the part of the shifted window still on the grid
    n = L1.gridP.n
    cs = np.concatenate([np.zeros((L1.gridQ.n, 1)), np.cumsum(L1.values, axis=1)], axis=1)
    lo = np.clip(shifts, 0, n)
    hi = np.clip(shifts + n, 0, n)
    return L1.gridP.step * (cs[:, hi] - cs[:, lo])


def _index_shifts(L1: PhaseSpaceDensity, L2: PhaseSpaceDensity) -> np.ndarray:
    hp = L1.gridP.step
    if not L1.gridP.same_step(L2.gridP):
        raise GridError("L1 and L2 momentum grids must share a step")
    if not L1.gridQ.same_step(L2.gridQ):
        raise GridError("L1 and L2 position grids must share a step")
    k = L2.gridP.points / hp
    kr = np.round(k)
    if np.max(np.abs(k - kr)) > 1e-9:
        raise GridError("L2 momentum samples must sit on multiples of the momentum step")
    return kr.astype(int)


def liouville_joint_evolution(L1: PhaseSpaceDensity, L2: PhaseSpaceDensity):
    """Marginals of ``q`` and ``Q`` after the impulsive coupling ``H = q P / eps``.

    The flow is ``p -> p - P``, ``Q -> Q + q``, so the density becomes
    ``L1(q, p + P) L2(Q - q, P)``.  The 4-d array is never formed: for each
    momentum sample ``P_j`` the ``p`` integral of ``L1(q, p + P_j)`` is a
    window sum and the ``q`` integral is a convolution.

    Returns ``(q_marginal, Q_marginal)``; the second lives on the
    Minkowski-sum grid of the two position grids.
    """
    shifts = _index_shifts(L1, L2)
    g = _momentum_window_sums(L1, shifts)
    hq, hP = L1.gridQ.step, L2.gridP.step
    wP = np.full(L2.gridP.n, hP)

    q_marg = g @ (wP * (hq * L2.values.sum(axis=0)))

    nout = L1.gridQ.n + L2.gridQ.n - 1
    Q_marg = np.zeros(nout)
    for j in range(L2.gridP.n):
        if wP[j] == 0.0 or not L2.values[:, j].any():
            continue
        Q_marg += wP[j] * hq * np.convolve(g[:, j], L2.values[:, j])
    out_grid = Grid1D.from_step(L1.gridQ.lo + L2.gridQ.lo, hq, nout)
    return GridDensity1D(L1.gridQ, q_marg), GridDensity1D(out_grid, Q_marg)


def liouville_momentum_marginal(L1: PhaseSpaceDensity, L2: PhaseSpaceDensity) -> GridDensity1D:
    """Marginal of the first pointer's momentum after the coupling, on ``L1``'s ``p`` grid.

    ``rho(p') = int dP L1_p(p' + P) M2(P)`` with ``L1_p`` the momentum marginal of
    ``L1`` and ``M2(P) = int L2(Q, P) dQ``; a kick ``P > 0`` moves ``p`` down.
    """
    shifts = _index_shifts(L1, L2)
    l1p = L1.values.sum(axis=0) * L1.gridQ.step
    m2 = L2.values.sum(axis=0) * L2.gridQ.step
    out = np.zeros(L1.gridP.n)
    for k, w in zip(shifts, m2 * L2.gridP.step):
        if w == 0.0:
            continue
        out += w * shift_samples(l1p, 1.0, -k)
    return GridDensity1D(L1.gridP, out)


def mass_conservation_check(before, after) -> float:
    """``|mass(after) - mass(before)|``; arguments may be densities or plain numbers."""
    def _mass(x):
        return float(x.mass()) if hasattr(x, "mass") else float(x)

    return abs(_mass(after) - _mass(before))
