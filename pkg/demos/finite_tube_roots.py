"""Finite-radius eigenvalues from the matching condition.

Run with ``python demos/finite_tube_roots.py``.
"""
import numpy as np

from fluxtube import finite_tube
from fluxtube.radial import Channel, FluxConfig

# Without flux the tube is invisible and the roots are Landau levels,
# E = n + m*theta(m) + sigma + 1/2, whatever the tube radius
cfg = FluxConfig(alpha=0.0, r_tube=0.7)
for sigma, m in [(-0.5, 0), (0.5, 0), (-0.5, 2), (0.5, -2)]:
    roots = finite_tube.scan_roots(cfg, Channel(sigma, m), 0.0, 4.0)
    print(f"alpha=0  sigma={sigma:+.1f} m={m:+d}:", np.round([r.energy for r in roots], 10))

# With flux the levels move, but (-1/2, m) and (+1/2, m-1) stay degenerate
# for every E > 0, at any radius
print()
for R in (0.8, 0.4, 0.1):
    cfg = FluxConfig(alpha=0.5, r_tube=R)
    down = [r.energy for r in finite_tube.scan_roots(cfg, Channel(-0.5, 1), 0.0, 4.0)]
    up = [r.energy for r in finite_tube.scan_roots(cfg, Channel(0.5, 0), 0.0, 4.2)]
    gap = max(min(abs(e - u) for u in up) for e in down if e > 0)
    print(f"R={R}: down {np.round(down, 6)}  max pair gap {gap:.1e}")

# As R shrinks the roots of (-1/2, 1) approach 1 + alpha + n, the levels of
# the regular Laguerre solutions
print("\nR -> 0 target:", [1.5 + n for n in range(3)])

# The small-R condition does not depend on E; it vanishes identically in
# half of the channels, which is what selects the regular family there
for m in range(-2, 3):
    row = [finite_tube.small_r_condition(Channel(s, m), 0.8) for s in (-0.5, 0.5)]
    print(f"m={m:+d}  small-R value (down, up) = ({row[0]:+.4f}, {row[1]:+.4f})")
