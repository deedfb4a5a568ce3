"""Numerical desk checks for tube domains in several complex variables.

Subpackages cover real base geometry and hulls, boundary-distance
oracles with Levi-form sampling, hull envelopes and convexity
certificates, sheeted covers of finite tubes, and power-series
continuation with monodromy counting.
"""

__version__ = "0.1.0"

from . import continuation, covers, envelope, errors, fixtures, geometry, kernels, sheeted, tube

__all__ = [
    "__version__",
    "continuation",
    "covers",
    "envelope",
    "errors",
    "fixtures",
    "geometry",
    "kernels",
    "sheeted",
    "tube",
]
