"""Matrix kernel, map representations and reduced dynamics (system independent)."""

from __future__ import annotations

from .config import RunConfig
from .hermmap import (
    MatrixMap,
    SignedKraus,
    apply,
    compose,
    entanglement_witness,
    extend_with_identity,
    is_completely_positive,
    is_trace_preserving,
    map_from_action,
    signed_kraus,
)
from .matlin import EigenSystem, eig_hermitian, partial_trace, pauli, tensor
from .reduced import (
    OperatorBasis,
    ReducedAffineMap,
    TransferMatrix,
    build_basis,
    reduce,
    schrodinger_crosscheck,
    transfer_matrix,
)

__all__ = [
    "RunConfig",
    # Matrix maps
    "MatrixMap",
    "SignedKraus",
    "apply",
    "compose",
    "entanglement_witness",
    "extend_with_identity",
    "is_completely_positive",
    "is_trace_preserving",
    "map_from_action",
    "signed_kraus",
    # Linear algebra
    "EigenSystem",
    "eig_hermitian",
    "partial_trace",
    "pauli",
    "tensor",
    # Reduced dynamics
    "OperatorBasis",
    "ReducedAffineMap",
    "TransferMatrix",
    "build_basis",
    "reduce",
    "schrodinger_crosscheck",
    "transfer_matrix",
]
