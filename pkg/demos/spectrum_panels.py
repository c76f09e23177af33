"""The R -> 0 spectrum for a range of flux values.

Each panel lists the states by m + sigma, the quantity that pairs the two
spin components.  Run with ``python demos/spectrum_panels.py``.
"""
from collections import defaultdict

from fluxtube import spectrum

for alpha in (0.0, 0.5, 1.0, 1.5, -1.0, 2.5):
    tab = spectrum.enumerate_spectrum(alpha, 0.0, 3.0, -3, 3)
    cols = defaultdict(list)
    for s in tab.states:
        tag = {"LagA": "A", "LagB": "B"}.get(s.family.value, "s")
        cols[s.channel.m + s.channel.sigma].append(f"{s.energy:.1f}{tag}")
    print(f"alpha = {alpha}   (class {spectrum.classify_alpha(alpha)},"
          f" block shift {tab.block_shift})")
    for key in sorted(cols):
        print(f"   m+sigma={key:+.1f}: " + " ".join(sorted(cols[key])))
    for down, up in tab.vacancies:
        # only the singlet is left in the pair (down, up); no Laguerre states
        print(f"   m+sigma={down.m + down.sigma:+.1f}: no Laguerre states")
    sing = tab.singular_states()
    if sing:
        print("   singular:", ", ".join(f"{s.family.value}(m={s.channel.m})" for s in sing))
    print()

# The anomalous moment splits the two spin components by kappa
tab = spectrum.enumerate_spectrum(1.0, 0.0023, 1.0, -2, 2)
print("alpha=1, kappa=0.0023:", sorted({round(s.energy, 5) for s in tab.states}))
