"""Transformation group algebras, the quantum double D(G) and their irreducible *-representations."""

from .errors import InputError, MathFailure, QDoubleError
from .groups import FiniteGroup, builtin, from_cayley_table, from_name
from .tga import AlgElement, GAction, conjugation_action, natural_action
from .reps import InducedIrrep, all_irreps, are_equivalent, commutant_dimension
from .double import quantum_double, verify_hopf, verify_quasitriangular, verify_star, tensor_decompose
from .dpr import dpr_irreps, intertwiner, verify_dpr

__all__ = [
    "AlgElement", "FiniteGroup", "GAction", "InducedIrrep", "InputError", "MathFailure", "QDoubleError",
    "all_irreps", "are_equivalent", "builtin", "commutant_dimension", "conjugation_action", "dpr_irreps",
    "from_cayley_table", "from_name", "intertwiner", "natural_action", "quantum_double", "tensor_decompose",
    "verify_dpr", "verify_hopf", "verify_quasitriangular", "verify_star",
]
__version__ = "0.1.0"
