"""Generalized helices: Frenet data, frame-constant fields, natural equations and cylinders."""

from .config import DEFAULT, NumericConfig

__version__ = "0.1.0"

__all__ = ["DEFAULT", "NumericConfig", "__version__"]
