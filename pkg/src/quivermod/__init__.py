"""Quiver / dimension-vector pairs: forms, reductions, stability and search."""
from .errors import (
    ComplexityError, DomainError, PreconditionError, QuiverError,
    WeightIncompatibleError,
)
from .quiver import (
    Arrow, Quiver, QuiverPair, canonical_key, cartan_form, cartan_matrix,
    cartan_with_unit, connected_components, degree, is_connected,
    is_strongly_connected, pairing, relabel, restrict_weight, ringel_form,
    support_restrict, tits_form, unit_vector,
)
from .classification import (
    FundamentalAnalysis, GraphClass, analyze_fundamental, classify_graph,
    find_constant_a4, fundamental_bound_violations, in_fundamental_set, root_type,
)
from .reductions import (
    ReductionResult, ReductionStep, admissible_moves, apply_sigma, apply_step,
    apply_tau, is_large, is_small_sink, is_small_source,
)
from .stability import (
    GenericEmbedCache, StabilityVerdict, brute_force_embeds, canonical_weight,
    generically_embeds, moduli_dimension, stability_verdict,
)
from .search import (
    ClassificationRow, ClassPredicate, SearchReport, affine_reduction_applicable,
    enumerate_affine, enumerate_fundamental, is_simple_dimvector,
    is_tau_sigma_minimal, verify_bounds,
)
from .io import emit_dot, load_fixture, load_pair

__version__ = "0.1.0"
