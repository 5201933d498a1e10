"""Workbench for Andrews-Curtis moves on tuples of group elements."""

from .words import Word, WordTuple, parse_word, format_word, total_length
from .moves import Move, R, L, I, C, apply_move, apply_sequence, invert_move, \
    invert_sequence, extract_words, identity_check
from .search import SearchConfig, PathCertificate, ak, trivialize, verify, classify
from .equations import Equation, find_nonsolution, faithfulness_witness
from .finite import FiniteGroup, kernel_of_lambda, orbits

__version__ = "0.1.0"

__all__ = [
    "Word", "WordTuple", "parse_word", "format_word", "total_length",
    "Move", "R", "L", "I", "C", "apply_move", "apply_sequence", "invert_move",
    "invert_sequence", "extract_words", "identity_check",
    "SearchConfig", "PathCertificate", "ak", "trivialize", "verify", "classify",
    "Equation", "find_nonsolution", "faithfulness_witness",
    "FiniteGroup", "kernel_of_lambda", "orbits",
]
