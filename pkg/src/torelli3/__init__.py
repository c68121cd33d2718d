"""Exact verification of infinitesimal Torelli for Z/3-symmetric (3,3) complete intersections."""

from .family import (CubicPair, ParamPoint, build_general, build_normalized, embed_params,
                     normalize, random_params)
from .polyring import Polynomial
from .scalars import GF, QQ

__version__ = "0.1.0"

__all__ = ["CubicPair", "ParamPoint", "Polynomial", "GF", "QQ", "build_general",
           "build_normalized", "embed_params", "normalize", "random_params"]
