"""Determinantal representations of bivariate polynomials.

Contractive and unitary representations ``det(I - K Z)`` on the bidisk and
Hermitian pencils ``det(I + x1 A1 + x2 A2)`` for real-zero polynomials.
"""

from .bidisk import (DetRep, SosDecomp, compose_product, lurking_isometry,
                     represent_contractive, represent_unitary, represent_univariate,
                     sos_decompose, verify_detrep)
from .errors import DetrepError, InputError, NumericalError
from .poly import BiPoly, MatPoly, TrigMatPoly, UniPoly
from .realization import SysMat
from .realzero import RealBiPoly, RZRep, represent_hermitian
from .stability import semistability, stability_radius

__version__ = "0.1.0"

__all__ = [
    "BiPoly", "DetRep", "DetrepError", "InputError", "MatPoly", "NumericalError",
    "RZRep", "RealBiPoly", "SosDecomp", "SysMat", "TrigMatPoly", "UniPoly",
    "compose_product", "lurking_isometry", "represent_contractive",
    "represent_hermitian", "represent_unitary", "represent_univariate",
    "semistability", "sos_decompose", "stability_radius", "verify_detrep",
]
