"""
A phase pointer does not survive the cut
========================================

Now the first apparatus is an oscillator in a coherent state |r e^{i mu0}>,
and the spin rotates its phase by -m chi.  The second pointer couples to the
cosine-phase operator C.  Quantum mechanically the mean shift of Q is
cos(mu) S(r).  Replacing the rotated coherent state by its (positive) Wigner
function and letting Q move by q / sqrt(q^2 + p^2) gives a different damping
factor, so where the cut is placed changes the prediction.
"""

import math

from vncut import (
    PhaseChainConfig,
    elementary_classical_shift,
    mean_shift_quantum,
    mean_shift_semiclassical_closed,
    mean_shift_semiclassical_quadrature,
    q_distribution,
    s_factor,
    semiclassical_factor,
)

m, chi = 1.0, math.pi / 6
print(f"sharp classical phase: shift = sin(m chi) = {elementary_classical_shift(m, chi):.6f}\n")

print(" r     quantum    (from density)  semiclassical (quadrature)   ratio")
for r in (0.25, 0.5, 1.0, 2.0, 4.0, 6.0):
    cfg = PhaseChainConfig(m=m, chi=chi, r=r)
    quantum = mean_shift_quantum(cfg)
    from_density = q_distribution(cfg).mean
    semi = mean_shift_semiclassical_closed(r, cfg.mu)
    semi_quad = mean_shift_semiclassical_quadrature(r, cfg.mu)
    print(f"{r:4.2f}  {quantum:9.6f}  {from_density:9.6f}      {semi:9.6f}  {semi_quad:9.6f}"
          f"         {quantum / semi:.4f}")

print("\nsmall r: S(r)/r -> 1, semiclassical/r -> sqrt(pi/2) =", f"{math.sqrt(math.pi / 2):.6f}")
r = 1e-3
print(f"  r = {r}: {s_factor(r) / r:.6f}, {semiclassical_factor(r) / r:.6f}")
