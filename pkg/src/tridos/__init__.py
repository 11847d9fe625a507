"""tridos: decorated triangulations of surfaces as oriented combinatorial
maps, with sphere ensembles, a pointed-triangulation metric, empirical
transverse measures, decoration-driven local operators, and spectral tools
(integrated density of states, eigenvalue jumps, compactly supported
eigenfunctions)."""

__version__ = "0.1.0"

from .core import (
    DEFAULT_DEGREE_BOUND,
    BoxOmega,
    DecorationSpace,
    ExactOmega,
    Patch,
    PointedTriangulation,
    Triangulation,
    ValidationReport,
    WildcardOmega,
    ball,
    boundary_cycles,
    build_triangulation,
    euler_characteristic,
    graph_distances,
    interior,
    neighbors,
    validate_faces,
)
from .errors import (
    ArcMismatch,
    ConfigError,
    DegreeExceeded,
    EmptyEnsemble,
    MissingBallClass,
    NonManifold,
    NonpositiveWeight,
    NotSelfAdjoint,
    OrientationConflict,
    SchemaViolation,
    TooLarge,
    TridosError,
    UnexpectedDegree,
    UnknownVertex,
    ZeroVector,
)
from .iso import (
    CanonicalCode,
    DeltaDetail,
    Embedding,
    automorphism_count,
    canonical_code,
    code_of_patch,
    delta,
    delta_hat,
    delta_hat_detail,
    embed,
    sphere_bundle,
    triangulation_code,
)
from .generators import (
    BoundaryWord,
    FaceImage,
    SubstitutionReport,
    SubstitutionRule,
    boundary_word,
    capped_cylinder_sphere,
    center_fan_rule,
    decorate_iid,
    double_grid_sphere,
    enumerate_spheres,
    four_subdivision_rule,
    glue_double,
    hyperbolic_sphere,
    identity_rule,
    octahedron,
    ring_annulus,
    substitution_apply,
    substitution_sphere,
    substitution_validate,
    tetrahedron,
    theta,
    triangular_ball,
    vertex_star,
)
from .measures import (
    EmpiricalMeasure,
    WalkDistribution,
    measure_distance,
    patch_frequency,
    reiter_defect,
    rw_distribution,
    rw_patch_density,
    uniform_measure,
)
from .operators import (
    DEFAULT_SCHEMA,
    DecorationSchema,
    LocalRule,
    OperatorMatrix,
    laplacian,
    laplacian_rule,
    local_rule_matrix,
    magnetic_laplacian,
    rule_from_operator,
    schema_decorations,
    symmetrize_directional,
    symmetrized_matrix,
    vertex_ball_class,
)
from .fileio import (
    load_eigenfunction_report,
    load_ids_curve,
    load_local_rule,
    load_matrix,
    load_measure,
    load_patch,
    load_spectrum_values,
    load_substitution_rule,
    load_triangulation,
    patch_from_dict,
    patch_to_dict,
    save_eigenfunction_report,
    save_ids_curve,
    save_local_rule,
    save_matrix,
    save_measure,
    save_patch,
    save_spectrum,
    save_substitution_rule,
    save_triangulation,
    triangulation_from_dict,
    triangulation_to_dict,
)
from .spectral import (
    CssReport,
    LocalizationReport,
    Spectrum,
    TestFunction,
    approx_eigen_check,
    css_search,
    css_verify,
    eigensolve,
    eigensolve_window,
    ids,
    ids_jump,
    shifted_defect_bound,
    spectral_localization,
    trace_site_average,
)

__all__ = [n for n in dir() if not n.startswith("_")]
