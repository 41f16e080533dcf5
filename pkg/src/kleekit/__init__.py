"""Polar duality, projections and sections of convex bodies in R^3, with
executable checks of the steps in Klee's projection theorem."""

from kleekit.config import ToleranceCfg
from kleekit.errors import GeometryError

__version__ = "0.1.0"

__all__ = ["ToleranceCfg", "GeometryError", "__version__"]
