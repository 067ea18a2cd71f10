"""Exact-arithmetic Landau-Ginzburg mirror symmetry calculator.

For an invertible quasihomogeneous polynomial w this package computes, all
in exact rational arithmetic: the Berglund-Huebsch dual, the Milnor ring of
the dual with its normalized residue pairing, the mirror map onto the
matrix-factorization state space H(w, G_w), genus-zero three- and
four-point correlators (including the Bernoulli-polynomial evaluation of
the nonconcave cases), and the WDVV reconstruction of the genus-zero
correlator sector.
"""

from .exactnum import QQ
from .poly import (AtomicBlock, InvertiblePolynomial, PolynomialError,
                   parse_polynomial, validate_and_decompose, from_text)
from .weights import SymmetryData
from .milnor import MilnorRing
from .mirror import StateSpace
from .correlators import CorrelatorEngine, ClassificationError
from .reconstruction import Reconstruction, ReconstructionError, KVector

__all__ = [
    "QQ", "AtomicBlock", "InvertiblePolynomial", "PolynomialError",
    "parse_polynomial", "validate_and_decompose", "from_text",
    "SymmetryData", "MilnorRing", "StateSpace", "CorrelatorEngine",
    "ClassificationError", "Reconstruction", "ReconstructionError",
    "KVector",
]

__version__ = "0.1.0"
