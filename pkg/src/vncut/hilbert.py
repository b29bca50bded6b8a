"""Truncated Fock space of the oscillator apparatus.

Coherent states, the cosine-phase operator ``C`` and its eigenbasis, and
the damping series ``S(r)`` giving ``<C>`` in a coherent state.

``C`` is the self-adjoint stand-in for ``cos(theta)`` whose eigenvectors are
``|cos th> = sqrt(2/pi) sum_n sin((n+1) th) |n>``.  Its number-basis matrix is
obtained from ``C = int_0^pi cos(th) |cos th><cos th| dth`` and the integral

    int_0^pi cos(th) sin((n+1) th) sin((s+1) th) dth = pi/4 [|n - s| = 1]

which gives 1/2 on both off-diagonals and zero elsewhere.  That step is a
derivation, not something read off a table; ``tests/test_hilbert.py`` checks
it against Gauss-Legendre quadrature of the integral above.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import gammaln

__all__ = [
    "MAX_TRUNCATION",
    "TruncationError",
    "FockVector",
    "CoherentParams",
    "CosOperator",
    "coherent_state",
    "derive_mu",
    "cos_operator",
    "cos_eigenvector",
    "s_factor",
    "expectation_C",
    "truncation_for",
]

MAX_TRUNCATION = 4096
TWO_PI = 2.0 * math.pi


class TruncationError(ValueError):
    """Requested Fock-space truncation is out of range."""


@dataclass(frozen=True)
class FockVector:
    """Amplitudes ``c_k`` on number states ``|0>, ..., |N-1>``."""

    amps: np.ndarray = field(repr=False)

    def __post_init__(self):
        a = np.array(self.amps, dtype=complex)
        if a.ndim != 1 or a.size < 1:
            raise TruncationError("FockVector needs a non-empty 1-d amplitude array")
        a.setflags(write=False)
        object.__setattr__(self, "amps", a)

    @property
    def truncation(self) -> int:
        return self.amps.size

    def norm2(self) -> float:
        return math.fsum(np.abs(self.amps) ** 2)

    def tail_mass(self) -> float:
        """``1 - sum |c_k|^2``: probability lost to the truncation."""
        return 1.0 - self.norm2()

    def number_distribution(self) -> np.ndarray:
        return np.abs(self.amps) ** 2

    def mean_number(self) -> float:
        return math.fsum(np.arange(self.truncation) * self.number_distribution())


@dataclass(frozen=True)
class CoherentParams:
    """Polar form ``alpha = r exp(i mu)`` of a coherent-state label."""

    r: float
    mu: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.r) or self.r < 0:
            raise ValueError(f"coherent amplitude must be finite and >= 0, got {self.r}")
        object.__setattr__(self, "r", float(self.r))
        object.__setattr__(self, "mu", float(self.mu) % TWO_PI)


def truncation_for(r: float) -> int:
    """Number-state cutoff that leaves a negligible Poisson tail at amplitude ``r``."""
    r2 = r * r
    return int(math.ceil(r2 + 12.0 * math.sqrt(r2 + 1.0) + 30.0))


def coherent_state(p: CoherentParams, N: int, max_truncation: int = MAX_TRUNCATION) -> FockVector:
    """Truncated coherent state ``e^{-r^2/2} (r e^{i mu})^k / sqrt(k!)``.

    Magnitudes are built in log space.  The vector is not renormalised;
    ``FockVector.tail_mass`` reports what the truncation dropped.
    """
    if N < 1:
        raise TruncationError(f"truncation must be >= 1, got {N}")
    if N > max_truncation:
        raise TruncationError(f"truncation {N} exceeds the cap {max_truncation}")
    k = np.arange(N)
    if p.r == 0.0:
        amps = np.zeros(N, dtype=complex)
        amps[0] = 1.0
        return FockVector(amps)
    logmag = -0.5 * p.r**2 + k * math.log(p.r) - 0.5 * gammaln(k + 1.0)
    return FockVector(np.exp(logmag) * np.exp(1j * p.mu * k))


def derive_mu(mu0: float, m: float, chi: float) -> float:
    """Coherent phase after the spin-dependent rotation: ``mu0 - m chi`` mod 2 pi."""
    return (mu0 - m * chi) % TWO_PI


@dataclass(frozen=True)
class CosOperator:
    """``C`` truncated to ``N`` number states (symmetric tridiagonal)."""

    truncation: int

    def __post_init__(self):
        if self.truncation < 1:
            raise TruncationError("truncation must be >= 1")

    @property
    def diagonal(self) -> np.ndarray:
        return np.zeros(self.truncation)

    @property
    def offdiagonal(self) -> np.ndarray:
        return np.full(self.truncation - 1, 0.5)

    def element(self, n: int, s: int) -> float:
        if not (0 <= n < self.truncation and 0 <= s < self.truncation):
            raise IndexError((n, s))
        return 0.5 if abs(n - s) == 1 else 0.0

    def to_dense(self) -> np.ndarray:
        return np.diag(self.offdiagonal, 1) + np.diag(self.offdiagonal, -1)

    def apply(self, v: FockVector) -> FockVector:
        c = v.amps
        out = np.zeros_like(c)
        out[:-1] += 0.5 * c[1:]
        out[1:] += 0.5 * c[:-1]
        return FockVector(out)

    def eigvalsh(self) -> np.ndarray:
        if self.truncation == 1:
            return np.zeros(1)
        return eigh_tridiagonal(self.diagonal, self.offdiagonal, eigvals_only=True)

    def eigh(self):
        if self.truncation == 1:
            return np.zeros(1), np.ones((1, 1))
        return eigh_tridiagonal(self.diagonal, self.offdiagonal)


def cos_operator(N: int) -> CosOperator:
    return CosOperator(N)


def cos_eigenvector(theta: float, N: int) -> FockVector:
    """``|cos theta>`` truncated to ``N`` number states.

    Delta-normalised (``<cos th|cos th'> = delta(th - th')``), so this is
    not a unit vector; use it inside ``d theta`` quadratures on ``(0, pi)``.
    """
    if not 0.0 < theta < math.pi:
        raise ValueError(f"theta must lie in the open interval (0, pi), got {theta}")
    n = np.arange(N)
    return FockVector(math.sqrt(2.0 / math.pi) * np.sin((n + 1) * theta))


def _s_terms(r: float) -> np.ndarray:
    # log of r^(2n+1) / sqrt(n! (n+1)!) * e^{-r^2}; summed until small and past the peak
    logr = math.log(r)
    r2 = r * r
    terms = []
    total = 0.0
    n = 0
    while True:
        t = math.exp(-r2 + (2 * n + 1) * logr - 0.5 * (math.lgamma(n + 1) + math.lgamma(n + 2)))
        terms.append(t)
        total += t
        if n > r2 and t <= 1e-15 * total:
            break
        n += 1
    return np.array(terms)


def s_factor(r: float) -> float:
    """Quantum damping of the mean pointer shift, ``<C> / cos(mu)`` for amplitude ``r``.

    ``S(r) = e^{-r^2} sum_n r^{2n+1} / sqrt(n! (n+1)!)``; tends to ``r`` for
    small ``r`` and to 1 from below for large ``r``.
    """
    r = float(r)
    if not math.isfinite(r):
        raise ValueError(f"s_factor needs a finite amplitude, got {r}")
    if r < 0:
        raise ValueError(f"s_factor needs r >= 0, got {r}")
    if r == 0.0:
        return 0.0
    return math.fsum(_s_terms(r))


def expectation_C(state: FockVector) -> float:
    """``<state|C|state> = sum_n Re(conj(c_n) c_{n+1})``."""
    c = state.amps
    return math.fsum(np.real(np.conj(c[:-1]) * c[1:]))
