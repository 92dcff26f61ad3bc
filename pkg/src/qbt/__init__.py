"""qbt: exact computer-algebra workbench for quadratic birational
transformations of projective space into hypersurfaces."""

from .fields import GF, QQ_FIELD, field_from_spec
from .groebner import (
    GroebnerBasis,
    Ideal,
    buchberger,
    colon,
    eliminate,
    ideal_equal,
    intersect,
    normal_form,
    saturate,
    saturate_irrelevant,
)
from .hilbert import (
    HilbertPolynomial,
    dim_degree_genus,
    graded_piece_dim,
    hilbert_polynomial,
    hilbert_series_numerator,
)
from .numerology import (
    ChernSegreRecord,
    TransformationProfile,
    admissible_cases,
    blowup_degree_identities,
    chern_segre_3fold,
    dims_from,
    divisibility_ok,
    double_point_solve,
    hilbert_poly_from_constraints,
    lines_bound_check,
    parity_obstruction,
    profile_families,
)
from .orders import GREVLEX, LEX, Block
from .ratmap import (
    BirationalCertificate,
    RationalMap,
    base_locus,
    codim2_quadric_map,
    find_inverse,
    graph_ideal,
    image_ideal,
    map_degree_probabilistic,
    project_parameterization,
    restrict_to_hyperplane,
    verify_birational_pair,
)
from .rings import (
    Polynomial,
    PolyRing,
    content_and_gcd,
    jacobian,
    poly_arith,
    poly_from_str,
    poly_to_str,
    substitute,
)
from .varieties import (
    QuadricForm,
    castelnuovo_independence,
    quadric_rank,
    secant_ideal,
    singular_locus_dim,
)

__version__ = "0.1.0"
