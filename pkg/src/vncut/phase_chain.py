"""Spin measured through the phase of an oscillator in a coherent state.

The spin rotates the coherent state, ``alpha -> exp(-i m chi) alpha``; a
second, linear pointer is then coupled to the cosine-phase operator ``C``.
Expanding the rotated state over the eigenbasis ``|cos th>`` gives the
distribution of ``Q`` as a mixture of copies of ``|Phi|^2`` shifted by
``cos th``, weighted by ``|<cos th|state>|^2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .hilbert import (
    CoherentParams,
    FockVector,
    coherent_state,
    derive_mu,
    expectation_C,
    s_factor,
    truncation_for,
)
from .linear_chain import ChainResult, PointerState, SpinState
from .numerics import GridDensity1D, GridError, gauss_legendre, off_grid_mass

__all__ = [
    "PhaseChainConfig",
    "rotated_state",
    "theta_weight",
    "theta_quadrature",
    "q_distribution",
    "mixture_q_distribution",
    "readout_overlap",
    "cos_rotated_phase",
    "mean_shift_quantum",
    "mean_shift_operator",
    "elementary_classical_shift",
]


def _default_phi():
    return PointerState.gaussian(sigma=0.1)


@dataclass(frozen=True)
class PhaseChainConfig:
    """Parameters of the phase-encoded measurement for one outcome ``m``.

    ``truncation`` and ``theta_nodes`` default to values derived from ``r``.
    ``j`` (the spin) bounds the coupling angle, ``0 < chi < pi / (2 j)``; it
    defaults to ``|m|``.
    """

    m: float = 1.0
    chi: float = math.pi / 6
    r: float = 2.0
    mu0: float = math.pi / 2
    truncation: int | None = None
    theta_nodes: int | None = None
    Phi: PointerState = field(default_factory=_default_phi, repr=False)
    j: float | None = None

    def __post_init__(self):
        if not math.isfinite(self.r) or self.r < 0:
            raise ValueError(f"r must be finite and >= 0, got {self.r}")
        j = abs(self.m) if self.j is None else self.j
        if not self.chi > 0:
            raise ValueError(f"chi must be positive, got {self.chi}")
        if j > 0 and not self.chi < math.pi / (2 * j):
            raise ValueError(f"chi={self.chi} overlaps outcomes for j={j}; need chi < pi/(2j)")
        N = truncation_for(self.r) if self.truncation is None else int(self.truncation)
        if N < 1:
            raise ValueError("truncation must be >= 1")
        nodes = self.theta_nodes
        if nodes is None:
            nodes = max(512, int(math.ceil(8 * math.sqrt(N) * self.r)))
        if nodes < 1:
            raise ValueError("theta_nodes must be >= 1")
        object.__setattr__(self, "j", float(j))
        object.__setattr__(self, "truncation", N)
        object.__setattr__(self, "theta_nodes", int(nodes))

    @property
    def mu(self) -> float:
        return derive_mu(self.mu0, self.m, self.chi)


def rotated_state(cfg: PhaseChainConfig) -> FockVector:
    """Coherent state after the spin coupling, global phase dropped."""
    return coherent_state(CoherentParams(cfg.r, cfg.mu), cfg.truncation)


def theta_weight(cfg: PhaseChainConfig, theta, state: FockVector | None = None) -> np.ndarray:
    """``|<cos th|state>|^2 = (2/pi) |sum_n sin((n+1) th) c_n|^2`` (vectorised in ``theta``)."""
    state = rotated_state(cfg) if state is None else state
    th = np.asarray(theta, dtype=float)
    if np.any(th <= 0) or np.any(th >= math.pi):
        raise ValueError("theta must lie in (0, pi)")
    n = np.arange(state.truncation)
    amp = np.sin(np.multiply.outer(th, n + 1)) @ state.amps
    return (2.0 / math.pi) * np.abs(amp) ** 2


def theta_quadrature(cfg: PhaseChainConfig):
    """Gauss-Legendre nodes on ``(0, pi)`` with weights already multiplied by ``theta_weight``."""
    th, w = gauss_legendre(cfg.theta_nodes, 0.0, math.pi)
    return th, w * theta_weight(cfg, th)


def _shifted_densities(Phi: PointerState, shifts) -> np.ndarray:
    # |Phi(Q - s)|^2 for every s, by a Fourier phase ramp on the wavefunction
    h = Phi.grid.step
    n = Phi.grid.n
    spectrum = np.fft.fft(Phi.wavefunction)
    freqs = np.fft.fftfreq(n, d=h)
    ramps = np.exp(-2j * np.pi * np.multiply.outer(shifts, freqs))
    return np.abs(np.fft.ifft(spectrum * ramps, axis=1)) ** 2


def q_distribution(cfg: PhaseChainConfig) -> ChainResult:
    """Distribution of ``Q`` for a spin in eigenstate ``m``, on ``Phi``'s grid.

    ``rho(Q) = int_0^pi |<cos th|state>|^2 |Phi(Q - cos th)|^2 d th``.
    """
    Phi = cfg.Phi
    density0 = np.abs(Phi.wavefunction) ** 2
    for edge in (-1.0, 1.0):
        lost = off_grid_mass(density0, Phi.grid.step, edge)
        if lost > 1e-12:
            raise GridError(f"shifts up to {edge:+} push mass {lost:.3g} off the Q grid")
    th, w = theta_quadrature(cfg)
    shifted = _shifted_densities(Phi, np.cos(th))
    return ChainResult.from_density(GridDensity1D(Phi.grid, w @ shifted), "quantum")


def mixture_q_distribution(spin: SpinState, cfg: PhaseChainConfig) -> ChainResult:
    """Spin superposition: the per-``m`` distributions mixed with weights ``|a_m|^2``."""
    total = np.zeros(cfg.Phi.grid.n)
    for m, w in zip(spin.m_values, spin.weights):
        if w == 0.0:
            continue
        sub = PhaseChainConfig(float(m), cfg.chi, cfg.r, cfg.mu0, cfg.truncation,
                               cfg.theta_nodes, cfg.Phi, spin.j)
        total += w * q_distribution(sub).distribution.values
    return ChainResult.from_density(GridDensity1D(cfg.Phi.grid, total), "quantum")


def readout_overlap(cfg: PhaseChainConfig, other_m: float) -> float:
    """``int min(rho_m, rho_other) dQ`` for the ``Q`` densities of outcomes ``m`` and ``other_m``.

    0 means the second pointer separates the two outcomes perfectly; 1 means
    it cannot tell them apart.  Half of it is the error of the best guess
    between two equally likely outcomes.  How small it must be is left to
    the caller; narrowing ``Phi`` lowers it only down to the spread of ``C``.
    """
    other = PhaseChainConfig(float(other_m), cfg.chi, cfg.r, cfg.mu0, cfg.truncation,
                             cfg.theta_nodes, cfg.Phi, cfg.j)
    a = q_distribution(cfg).distribution
    b = q_distribution(other).distribution
    return GridDensity1D(a.grid, np.minimum(a.values, b.values)).mass()


def cos_rotated_phase(mu0, m, chi) -> float:
    """``cos(mu0 - m chi)``, returned as ``sin(m chi)`` when ``mu0 = pi/2`` so ``m = 0`` gives exactly 0."""
    if mu0 == math.pi / 2:
        return math.sin(m * chi)
    return math.cos(mu0 - m * chi)


def mean_shift_quantum(cfg: PhaseChainConfig) -> float:
    """Closed form ``cos(mu0 - m chi) S(r)`` for ``<Q> - <Q>_0``."""
    return cos_rotated_phase(cfg.mu0, cfg.m, cfg.chi) * s_factor(cfg.r)


def mean_shift_operator(cfg: PhaseChainConfig) -> float:
    """``<C>`` in the truncated rotated state, straight from the tridiagonal matrix."""
    return expectation_C(rotated_state(cfg))


def elementary_classical_shift(m, chi, theta0=math.pi / 2) -> float:
    """Textbook answer with a sharp classical phase: ``cos(theta0 - m chi)``, i.e. ``sin(m chi)``."""
    return cos_rotated_phase(theta0, m, chi)
