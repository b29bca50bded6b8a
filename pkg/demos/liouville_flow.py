"""
The classical step as a canonical flow
======================================

Treating the first pointer classically means evolving a phase-space density
under H = q P.  The flow Q -> Q + q, p -> p - P turns L1(q, p) L2(Q, P) into
L1(q, p + P) L2(Q - q, P).  The Q marginal only ever sees the position
marginal of L1, whatever the momentum profile looks like.
"""

import numpy as np

from vncut.numerics import Grid1D, PhaseSpaceDensity, convolve, gaussian_density
from vncut.linear_chain import liouville_joint_evolution, liouville_momentum_marginal

g = Grid1D(-8.0, 8.0, 257)
q, p = np.meshgrid(g.points, g.points, indexing="ij")

# First pointer: position marginal N(0.7, 0.4^2), with a momentum profile
# that is correlated with q and skewed.
profile = gaussian_density(p, 0.8 * q - 0.5, 0.7) * (1 + 0.5 * np.tanh(p))
profile /= profile.sum(axis=1, keepdims=True) * g.step
L1 = PhaseSpaceDensity(g, g, gaussian_density(q, 0.7, 0.4) * profile)

# Second pointer at rest near Q = 0 with a small momentum spread.
L2 = PhaseSpaceDensity(g, g, gaussian_density(q, 0.0, 0.3) * gaussian_density(p, 1.0, 0.25))

q_marg, Q_marg = liouville_joint_evolution(L1, L2)
reference = convolve(L1.marginal_position(), L2.marginal_position())
print("Q marginal vs plain convolution of position marginals:",
      f"{np.max(np.abs(Q_marg.values - reference.values)):.2e}")
print(f"q marginal unchanged: {np.max(np.abs(q_marg.values - L1.marginal_position().values)):.2e}")

# The first pointer is kicked by the second one's momentum, in the negative direction.
pm = liouville_momentum_marginal(L1, L2)
print(f"<p> before {L1.marginal_momentum().mean():+.4f}, after {pm.mean():+.4f} (kick -<P> = -1)")
