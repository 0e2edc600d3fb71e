"""Finite category algebras over rigs as toy models of quantum fields."""
from .algebra import (
    AlgElement,
    center_basis,
    convolve,
    element,
    from_matrix,
    indeterminate,
    involute_element,
    to_matrix,
    unit,
    zero,
)
from .category import (
    FinCategory,
    InvolutionStructure,
    cyclic_group,
    discrete,
    free_acyclic,
    indiscrete,
    inverse_involution,
    make_standard,
    preorder,
    reversal_involution,
    symmetric_group,
    trivial_involution,
    validate_category,
    validate_involution,
)
from .causal import (
    CausalCategory,
    is_region,
    local_algebra,
    make_causal,
    minkowski_lattice,
    relevant_category,
    spacelike_separated,
)
from .dynamics import coined_walk, is_unitary, rotation_action, validate_action, walk_evolve
from .errors import CatFieldError
from .gns import contractivity_check, gns_construct, hilbert_functor_map, module_map
from .rig import BOOLEAN, COMPLEX, NATURAL, TROPICAL, MatrixRig, rig_instance
from .states import State, evaluate, positivity_probe, state_from_weights, vector_state

__all__ = [
    "AlgElement",
    "BOOLEAN",
    "COMPLEX",
    "CatFieldError",
    "CausalCategory",
    "FinCategory",
    "InvolutionStructure",
    "MatrixRig",
    "NATURAL",
    "State",
    "TROPICAL",
    "center_basis",
    "coined_walk",
    "contractivity_check",
    "convolve",
    "cyclic_group",
    "discrete",
    "element",
    "evaluate",
    "free_acyclic",
    "from_matrix",
    "gns_construct",
    "hilbert_functor_map",
    "indeterminate",
    "indiscrete",
    "inverse_involution",
    "involute_element",
    "is_region",
    "is_unitary",
    "local_algebra",
    "make_causal",
    "make_standard",
    "minkowski_lattice",
    "module_map",
    "positivity_probe",
    "preorder",
    "relevant_category",
    "reversal_involution",
    "rig_instance",
    "rotation_action",
    "spacelike_separated",
    "state_from_weights",
    "symmetric_group",
    "to_matrix",
    "trivial_involution",
    "unit",
    "validate_action",
    "validate_category",
    "validate_involution",
    "vector_state",
    "walk_evolve",
    "zero",
]
