"""
Spin-1/2 particle in a homogeneous magnetic field pierced by a thin flux
tube, and the pure Aharonov-Bohm limit without the homogeneous field.

Modules
-------
specfun      special functions with error estimates
radial       closed-form piecewise radial profiles and ladder operators
finite_tube  matching condition at finite tube radius
spectrum     exact spectrum and eigenfunctions in the zero-radius limit
ab           Aharonov-Bohm scattering states, zero modes and index
analysis     regularized scalar products and numerical checks
verify       end-to-end verification suite
cli          command line interface
"""

from .radial import Channel, FieldMode, FluxConfig, RadialProfile
from .spectrum import EigenState, Family, SpectrumTable, enumerate_spectrum, state_profile
from .finite_tube import scan_roots
from .ab import ab_state_profile, ab_zero_modes, index_ab
from .spectrum import index_singular

__version__ = "0.1.0"

__all__ = [
    "Channel", "FieldMode", "FluxConfig", "RadialProfile", "EigenState", "Family",
    "SpectrumTable", "enumerate_spectrum", "state_profile", "scan_roots",
    "ab_state_profile", "ab_zero_modes", "index_ab", "index_singular",
]
