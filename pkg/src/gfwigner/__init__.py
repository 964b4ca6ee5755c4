"""Discrete Wigner functions on the GF(2^n) phase space of n qubits."""

from .errors import CapabilityError, CheckFailure
from .field import CoordinateMap, FieldSpec, build_coordinate_map, default_cmap, make_field
from .net import QuantumNet, all_plus_net, random_net
from .pauli import PauliElement, TranslationBasis
from .wigner import ExactState, WignerTable, wigner_of_state

__version__ = "0.1.0"

__all__ = [
    "CapabilityError",
    "CheckFailure",
    "CoordinateMap",
    "ExactState",
    "FieldSpec",
    "PauliElement",
    "QuantumNet",
    "TranslationBasis",
    "WignerTable",
    "all_plus_net",
    "build_coordinate_map",
    "default_cmap",
    "make_field",
    "random_net",
    "wigner_of_state",
]
