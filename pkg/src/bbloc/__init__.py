"""Closure-chain complexes of one-parameter flow decompositions and the
compactly supported measures they compute, in exact rational arithmetic."""

from .complexes import (
    FixedPoint,
    SimplicialComplex,
    Witness,
    check_complex,
    cone_points,
    facets,
    is_pure,
    order_complex,
)
from .coefficients import (
    CoefficientTable,
    IncompleteModelError,
    NotAChainError,
    assembling_check,
    degree,
    enumerate_witnesses,
    recurrence_check,
    v_from_witnesses,
)
from .lattice import (
    DimensionMismatch,
    NoBasisError,
    Rat,
    barycentric,
    det,
    lex_first_basis,
    normalized_volume,
    rat,
    weight,
)
from .measures import (
    DegenerateConeError,
    DHMeasure,
    NonGenericPointError,
    alternating_density_at,
    density_at,
    dh_from_model,
    restrict_torus,
    total_mass,
)
from .localization import (
    FractionSum,
    HypothesisFailedError,
    PFTensor,
    SparsePoly,
    ab_sum,
    enumerate_schemata,
    equivariant_multiplicity,
    fraction_sums_equal,
    integrate_class_at,
    linrels_check,
    tangent_cone_identity,
    tau_tensor,
)
from .models import (
    GenericModel,
    SRModel,
    ToricModel,
    ValidationError,
    chevalley_v,
    load_generic,
    load_model,
    load_model_file,
    pulling_triangulation,
    sr_closure_complex,
    sr_iterated_closure,
    toric_bb_faces,
    toric_v,
)

__version__ = "0.1.0"
