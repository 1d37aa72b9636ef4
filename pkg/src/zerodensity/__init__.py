"""Explicit Carlson-type zero-density estimate for the Riemann zeta function.

Constant pipeline, bound comparison and numerical checks of the supporting
inequalities.
"""

__version__ = "0.1.0"

from .constants import DensityParams, k_final, k_limit
from .extrange import ExtReal, xr_from_log10
from .bounds import carlson_bound

__all__ = ["DensityParams", "ExtReal", "carlson_bound", "k_final", "k_limit", "xr_from_log10"]
