"""Algebraic independence over finite fields: shift-rank certificates, faithful maps, hitting sets."""

from .field import FieldElement, FieldSpec
from .poly import MPoly, hasse_derivative, truncated_shift
from .matrix import EXACT, Exact, PolyMatrix, Randomized, rank_of_poly_matrix
from .criteria import (
    CertifiedIndependent, DependentWitness, NotCertifiedAt, PolySystem, algebraic_rank,
    build_pss_matrix, certify_min_t, jacobian_certify, pss_test,
)
from .oracle import Annihilator, NoneUpTo, annihilator_search, reference_algrank
from .condenser import (
    WeightAssignment, candidate_weight_list, is_isolating, ks_weights, rank_preservation_check,
    transfer_matrix, vandermonde_det_degree_check,
)
from .faithful import (
    Depth4Term, DisjointProduct, FaithfulMap, Generator, Sparse, apply_map, build_map,
    candidate_maps, decomposition_check, evolution_check, extended_pss_matrix, verify_faithful,
)
from .pit import (
    Composition, CompositionBlackbox, HittingSet, NonzeroAt, Zero, blackbox_pit,
    depth4_hitting_set, hitting_set_for_composition, sparse_hsg,
)

__version__ = "0.1.0"
