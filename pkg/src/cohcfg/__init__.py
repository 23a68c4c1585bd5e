"""Coherent configurations, Weisfeiler-Leman closure, base machinery, and
schurity recognition for antisymmetric configurations and tournaments."""

from .config import (
    ColorMatrix,
    CoherentConfiguration,
    EquivalenceRelation,
    build_config,
    equivalence_chain,
    equivalence_relations,
    intersection_number,
    quotient,
    restriction,
    structure_flags,
)
from .perm import (
    FixStats,
    Permutation,
    PermutationGroup,
    color_aut_backtrack,
    fix_stats,
    orbits,
    pair_orbits,
    setwise_stabilizer,
)
from .refine import (
    AlgebraicIsomorphism,
    StabilizationRefusal,
    coherent_closure,
    fission,
    fission_points,
    inv_of_group,
    simultaneous_stabilization,
)
from .products import (
    ProductPointMap,
    cartesian_power,
    exponentiation,
    glue_disjoint_union,
    hamming_relations,
    rho_map,
    wreath_product,
)
from .bases import (
    BaseCertificate,
    base_number_search,
    build_exponentiation_base,
    build_thin_generalized_base,
    build_wreath_generalized_base,
    indistinguishing_numbers,
    is_generalized_base,
    sufficient_base2_checks,
)
from .recognize import (
    Majorant,
    SchurityRefusal,
    Tournament,
    TournamentReport,
    build_majorant,
    find_isomorphism,
    list_isomorphisms,
    recognize_schurity,
    test_config_group,
    tournament_pipeline,
    wreath_embedding,
)

__version__ = "0.1.0"
