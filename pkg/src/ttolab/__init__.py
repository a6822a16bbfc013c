"""Exact and floating computation in finite-dimensional model spaces."""

from .scalars import Scalar, config
from .poly import Polynomial, poly_z
from .rational import RationalFn
from .blaschke import BlaschkeProduct

__all__ = [
    "Scalar",
    "config",
    "Polynomial",
    "poly_z",
    "RationalFn",
    "BlaschkeProduct",
]
