"""Exact affine Hecke, affine Schur, KLR and quiver Schur algebras."""
from .combinatorics import Field, Perm, ExtAffineElem, SegmentedSeq, make_field, segment
from .polyalg import KERNEL_BACKEND, LaurentPoly, RationalExpr, TruncSeries

__all__ = [
    "Field",
    "Perm",
    "ExtAffineElem",
    "SegmentedSeq",
    "make_field",
    "segment",
    "KERNEL_BACKEND",
    "LaurentPoly",
    "RationalExpr",
    "TruncSeries",
]
__version__ = "0.1.0"
