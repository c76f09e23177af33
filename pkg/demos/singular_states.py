"""Singular states: norms, the regularized product and delta-like densities.

Run with ``python demos/singular_states.py``.
"""
import math

import numpy as np

from fluxtube import analysis, spectrum
from fluxtube.radial import Channel
from fluxtube.spectrum import EigenState, Family

alpha = 1.5
st = EigenState.make(Family.SING_DOWN, Channel(-0.5, 0), 0, alpha)

# The normalization constant is exact only as R -> 0; at finite R the norm
# is off by a power of R
for R in (1e-1, 1e-2, 1e-3, 1e-4):
    p = spectrum.state_profile(alpha, st, R)
    print(f"R={R:.0e}  norm={analysis.inner_product(p, p):.8f}")

# The regularized product extrapolates along a sequence of radii
fam = analysis.state_family(alpha, st)
lim, vals = analysis.regularized_inner_product(fam, fam, return_values=True)
print("sequence:", np.round(vals, 8), "-> limit", f"{lim:.10f}")

# Almost all of the probability sits inside a small disc around the tube
for R in (1e-2, 1e-3, 1e-4):
    print(f"R={R:.0e}  mass in r<0.1: {analysis.delta_mass(st, alpha, 0.1, R):.6f}")

# so the overlap with any smooth function dies away
g = lambda r: math.exp(-r * r / 2) / math.sqrt(math.pi)
for R in (1e-2, 1e-4, 1e-6):
    p = spectrum.state_profile(alpha, st, R)
    ov = analysis.inner_product(p, analysis.function_profile(g, p.channel, p.config))
    print(f"R={R:.0e}  overlap with a Gaussian: {ov:.3e}")

# Gram matrix of a few low states, singular one included
states = [st] + [EigenState.make(Family.LAG_A, Channel(-0.5, 0), n, alpha) for n in range(2)]
states.append(EigenState.make(Family.LAG_B, Channel(0.5, -2), 0, alpha))
print(np.round(analysis.gram(states, alpha), 8))
