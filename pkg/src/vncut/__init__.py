"""Two-stage measurement chains with a movable quantum/classical cut.

A spin is read by a first apparatus, which is read by a second pointer.
The package computes the second pointer's distribution with the first
apparatus kept quantum or turned into a classical Liouville density, for
a linear pointer (where the two agree) and for a phase-encoded pointer
read through the cosine-phase operator (where they do not).
"""

__version__ = "0.1.0"

from .hilbert import (
    CoherentParams,
    CosOperator,
    FockVector,
    coherent_state,
    cos_eigenvector,
    cos_operator,
    derive_mu,
    expectation_C,
    s_factor,
    truncation_for,
)
from .linear_chain import (
    ChainResult,
    PointerState,
    SpinState,
    classical_cut_chain,
    first_pointer_distribution,
    liouville_joint_evolution,
    mass_conservation_check,
    quantum_chain,
)
from .numerics import (
    Grid1D,
    GridDensity1D,
    PhaseSpaceDensity,
    bessel_i,
    bessel_i_scaled,
    convolve,
    gauss_legendre,
    trapezoid_2d,
)
from .phase_chain import (
    PhaseChainConfig,
    elementary_classical_shift,
    mean_shift_quantum,
    q_distribution,
    readout_overlap,
    rotated_state,
    theta_weight,
)
from .semiclassical import (
    DampingCurve,
    WignerCoherent,
    damping_curve,
    conjugate_momentum_pc,
    mean_shift_semiclassical_closed,
    mean_shift_semiclassical_quadrature,
    semiclassical_factor,
    semiclassical_q_distribution,
    wigner_density,
)
