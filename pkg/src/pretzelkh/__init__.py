"""Reduced integer Khovanov homology of 3-strand pretzel links.

Three independent routes — the full cube of resolutions (`khcube`), the
twist-cube with Gaussian elimination (`twist`), and closed formulas
(`formulas`) — computing the same invariant, cross-validated exactly.
"""

from .diagram import (
    Classification,
    DiagramError,
    OrientationError,
    PlanarDiagram,
    PretzelParams,
    build_pretzel_pd,
    classify,
    crossing_counts,
    knot_orientation_pattern,
    normalize_params,
    valid_orientation_patterns,
)
from .formulas import (
    BigradedPoly,
    FormulaDomainError,
    bigraded_table,
    delta_table,
    floor_contributions,
    knot_delta_table,
    phi_poly,
    psi_poly,
    wall_contributions,
)
from .khcube import (
    GradedComplex,
    ParseError,
    ResourceCapError,
    build_reduced_complex,
    parse_pd,
    resolve_state,
)
from .linalg import (
    HomologyTable,
    IntegrityError,
    SparseIntMatrix,
    delta_collapse,
    graded_euler_characteristic,
    homology,
    smith_normal_form,
    table_euler_characteristic,
)
from .twist import (
    FreeComplex,
    TwistComplex,
    TwistCube,
    build_twist_cube,
    fast_homology,
    gaussian_eliminate,
    signed_path_count,
    to_free_complex,
    twist_complex,
)

__all__ = [
    "Classification", "DiagramError", "OrientationError", "PlanarDiagram",
    "PretzelParams", "build_pretzel_pd", "classify", "crossing_counts",
    "knot_orientation_pattern", "normalize_params",
    "valid_orientation_patterns",
    "BigradedPoly", "FormulaDomainError", "bigraded_table", "delta_table",
    "floor_contributions", "knot_delta_table", "phi_poly", "psi_poly",
    "wall_contributions",
    "GradedComplex", "ParseError", "ResourceCapError",
    "build_reduced_complex", "parse_pd", "resolve_state",
    "HomologyTable", "IntegrityError", "SparseIntMatrix", "delta_collapse",
    "graded_euler_characteristic", "homology", "smith_normal_form",
    "table_euler_characteristic",
    "FreeComplex", "TwistComplex", "TwistCube", "build_twist_cube",
    "fast_homology", "gaussian_eliminate", "signed_path_count",
    "to_free_complex", "twist_complex",
]

__version__ = "0.1.0"
