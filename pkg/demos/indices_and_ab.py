"""Witten indices with and without the homogeneous field, and the k = 0
modes of the pure Aharonov-Bohm tube.

Run with ``python demos/indices_and_ab.py``.
"""
import numpy as np

from fluxtube import ab, spectrum

# Step data for both indices; they agree at every integer flux
print(" alpha  I_s  I_AB")
for a, i_ab, i_s in ab.index_curve(np.arange(-3, 3.01, 0.25).round(2)):
    print(f"{a:+6.2f} {i_s:4d} {i_ab:5d}")

# Zero modes of the tube alone sort into three regimes according to m + alpha
print()
for alpha in (0.7, 1.0, 1.5, 2.7, -1.0):
    modes = ab.ab_zero_modes(alpha, 1e-3)
    desc = ", ".join(f"m={z.channel.m} {z.regime.value}" for z in modes) or "none"
    print(f"alpha={alpha}: {desc}")

# With the field switched back on, the same mode is a singular state whose
# Gaussian factor flattens as the magnetic length grows
(mode,) = [z for z in ab.ab_zero_modes(1.5, 0.05) if z.regime is ab.ZeroModeRegime.NORMALIZABLE]
p = mode.profile()
for lam in (1e1, 1e2, 1e4):
    f = ab.vanishing_field_profile(1.5, mode, lam)
    err = max(abs(f(r) - p(r)) for r in np.linspace(0.1, 2, 20))
    print(f"lambda={lam:.0e}  max deviation {err:.2e}")
print("I_s(1.5) =", spectrum.index_singular(1.5), " I_AB(1.5) =", ab.index_ab(1.5))
