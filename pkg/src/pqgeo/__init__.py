"""Desk-scale computations in pseudo-Riemannian hyperbolic geometry.

The package is organized around a quadratic form of signature (p, q+1):
``forms`` handles the bilinear algebra, ``model`` the projective model
and its conformal boundary, ``graphs`` spacelike graphs over the
boundary sphere, ``crowns`` crown configurations and their orbits,
``groups`` reflection groups, polygon groups, and bending, ``anosov``
spectral diagnostics of finitely generated subgroups, and ``cli`` the
batch command-line frontend.
"""

__version__ = "0.1.0"

from .forms import GeometryError, QuadraticSpace, Signature, standard_space
from .model import (
    BoundaryPoint,
    ConformalCoords,
    HPoint,
    HalfspaceDomain,
    SignConsistencyError,
    TimelikeFrame,
    conformal_split,
    conformal_unsplit,
    hilbert_distance,
    lift_nonpositive,
    omega_membership,
    pair_class,
    pair_class_conformal,
)
from .graphs import (
    GraphReport,
    LipschitzGraph,
    constant_graph,
    equatorial_graph,
    folded_boundary_graph,
    graph_points,
    isotropic_boundary_graph,
    lipschitz_check,
    maximal_graph,
    split_spacetime,
    timelike_distance,
)
from .crowns import (
    AdaptedBasis,
    Crown,
    adapted_basis,
    crown_orbit_graph,
    detect_crowns,
    is_boundary_crown,
    maximality_test,
    orbit_hilbert_distance,
    orbit_point,
    quadrilateral_demo,
)
from .groups import (
    BendDatum,
    CoxeterDiagram,
    HnnLetter,
    ReflectionRep,
    bend_amalgam,
    bend_hnn,
    canonical_X,
    cartan_matrix,
    det_roots,
    gt_polygon,
    lie_closure_dim,
    orthogonal_lie_basis,
    pentagon_with_arms,
    polygon_deform,
    signature_scan,
    toy_bend_datum,
    word_ball,
)
from .anosov import (
    gap_series,
    jordan_projection,
    limit_cone_sample,
    negativity_test,
    proximality_class,
    sample_limit_set,
)

__all__ = [
    "__version__",
    "GeometryError",
    "QuadraticSpace",
    "Signature",
    "standard_space",
    "BoundaryPoint",
    "ConformalCoords",
    "HPoint",
    "HalfspaceDomain",
    "SignConsistencyError",
    "TimelikeFrame",
    "conformal_split",
    "conformal_unsplit",
    "hilbert_distance",
    "lift_nonpositive",
    "omega_membership",
    "pair_class",
    "pair_class_conformal",
    "GraphReport",
    "LipschitzGraph",
    "constant_graph",
    "equatorial_graph",
    "folded_boundary_graph",
    "graph_points",
    "isotropic_boundary_graph",
    "lipschitz_check",
    "maximal_graph",
    "split_spacetime",
    "timelike_distance",
    "AdaptedBasis",
    "Crown",
    "adapted_basis",
    "crown_orbit_graph",
    "detect_crowns",
    "is_boundary_crown",
    "maximality_test",
    "orbit_hilbert_distance",
    "orbit_point",
    "quadrilateral_demo",
    "BendDatum",
    "CoxeterDiagram",
    "HnnLetter",
    "ReflectionRep",
    "bend_amalgam",
    "bend_hnn",
    "canonical_X",
    "cartan_matrix",
    "det_roots",
    "gt_polygon",
    "lie_closure_dim",
    "orthogonal_lie_basis",
    "pentagon_with_arms",
    "polygon_deform",
    "signature_scan",
    "toy_bend_datum",
    "word_ball",
    "gap_series",
    "jordan_projection",
    "limit_cone_sample",
    "negativity_test",
    "proximality_class",
    "sample_limit_set",
]
