"""Quasi-exceptional domain construction and verification toolkit."""

from ._backend import backend_name
from .elliptic import GeneratorChoice, Lattice, lattice_build, sigma_w, wp, wp_prime, zeta_w

__version__ = "0.1.0"

__all__ = [
    "GeneratorChoice",
    "Lattice",
    "backend_name",
    "lattice_build",
    "sigma_w",
    "wp",
    "wp_prime",
    "zeta_w",
    "__version__",
]
