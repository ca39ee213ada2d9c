"""Classical correlations in causal networks: finite local models, universal
cardinality bounds, exact Bell-polytope membership, triangle-model search, and
the bilocal detection-efficiency certificate."""

from .network import (
    EXACT,
    FLOAT,
    TOL,
    Behavior,
    MarginalViolation,
    Network,
    PartySplit,
    ResourceCapError,
    affine_dimension,
    behavior_index,
    behavior_unindex,
    cardinality_bound_basic,
    cardinality_bound_refined,
    is_nonsignaling,
    relaxation_size,
)
from .models import (
    ConditionalBehaviorFamily,
    FiniteLocalModel,
    caratheodory_reduce,
    compress_source,
    conditional_family,
    evaluate,
    minimal_pneq_model,
    peq_behavior,
    pin_source,
    pneq_behavior,
    threshold_pneq_model,
    threshold_triangle_model,
)
from .bell import (
    Decomposition,
    Facet,
    LocalityCertificate,
    StrategyMatrix,
    cg_coordinates,
    cg_labels,
    enumerate_strategies,
    facet_enumeration,
    membership_lp,
)
from .triangle import (
    INTERIOR,
    ONE,
    ZERO,
    FeasibilityProblem,
    TriangleSymmetry,
    behavior_support,
    canonical_pattern,
    enumerate_and_prune,
    model_from_parameters,
    numeric_feasibility,
    possibilistic_feasible,
    possible_outcomes,
    support_stabilizer,
    symmetry_group,
)
from .polynomials import MultiPoly
from .bilocal import (
    CertificateError,
    CertificateReport,
    build_model_table,
    g_polynomials,
    probability_from_signs,
    search_certificate,
    verify_bilocal_certificate,
)
from .quantum import (
    EffectiveObservables,
    assembled_probabilities,
    build_operators,
    correlator,
    full_table,
)
from .cli import data_path

__version__ = "0.1.0"
