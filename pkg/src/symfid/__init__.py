"""Fidelity maximization for symmetric multiqubit states under LU and SLOCC operations."""

from symfid.errors import CapacityError, DegenerateError, DomainError
from symfid.symstate import (
    DenseState,
    OverlapValue,
    Qubit,
    SymState,
    dicke,
    overlap,
    product_state,
    sym_to_dense,
    symmetric_family_state,
)

__all__ = [
    "CapacityError",
    "DegenerateError",
    "DomainError",
    "DenseState",
    "OverlapValue",
    "Qubit",
    "SymState",
    "dicke",
    "overlap",
    "product_state",
    "sym_to_dense",
    "symmetric_family_state",
]
