"""Quantum Mpemba effect in PT-symmetric qubits coupled to a thermal bath."""

from .model import ModelParams, bloch_state, build_liouvillian
from .quantifiers import QuantifierKind
from .spectral import analyze, locate_lep, overlaps, spectrum_of
from .mpemba import CrossingConfig, compare, count_crossings, scan_grid

__all__ = [
    "CrossingConfig",
    "ModelParams",
    "QuantifierKind",
    "analyze",
    "bloch_state",
    "build_liouvillian",
    "compare",
    "count_crossings",
    "locate_lep",
    "overlaps",
    "scan_grid",
    "spectrum_of",
]

__version__ = "0.1.0"
