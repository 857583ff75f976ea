"""Dissipative preparation of non-Gaussian states with linear-and-quadratic reservoirs.

Submodules: fock, special, engineered, states, wigner, darkstate,
opensystem, optomech, io, cli.
"""
from .errors import LQResError
from .io import version

__version__ = version()
__all__ = ["LQResError", "__version__"]
