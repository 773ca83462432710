"""Exact homology of chessboard and matching complexes."""

__version__ = "0.1.0"

from .complexes import (Chessboard, ComplexSpec, FiltrationStage, Gamma, MatchingKn, NotAFace,
                        SubBoard, Void, board, complex_dimension, enumerate_faces, face_index, nu)
from .chains import GF, ZZ, Chain, Ring, SparseMatrix, boundary, boundary_matrix, wedge
from .homology import (ClassOrder, HomologyGroup, class_order, group_exponent, homology,
                       rank_mod_p, snf)

__all__ = [
    "Chessboard", "ComplexSpec", "FiltrationStage", "Gamma", "MatchingKn", "NotAFace", "SubBoard",
    "Void", "board", "complex_dimension", "enumerate_faces", "face_index", "nu",
    "GF", "ZZ", "Chain", "Ring", "SparseMatrix", "boundary", "boundary_matrix", "wedge",
    "ClassOrder", "HomologyGroup", "class_order", "group_exponent", "homology", "rank_mod_p", "snf",
]
