"""Metric curvature, embeddability certificates, and quasiconformal bounds
for piecewise-flat data.

The package splits into three layers:

* pointwise model geometry: comparison angles and distance realizations in
  the three constant-curvature model surfaces (:mod:`plembed.spaceform`),
  and four-point invariants built on top of them (:mod:`plembed.quadruple`);
* graph-level checks: shortest-path metrics of edge-weighted graphs and
  per-vertex compatibility certificates (:mod:`plembed.skeleton`);
* piecewise-linear maps: dilatation bounds for polyhedral complexes
  (:mod:`plembed.qcbounds`) and explicitly pleated triangle elements
  (:mod:`plembed.bzelement`).

Everything is exercised through the ``plembed`` command line tool as well;
see the README for the subcommand catalogue.
"""

from .bzelement import (
    AcuteTriangle,
    DefectReport,
    FoldParams,
    PleatedElement,
    canonical_element,
    fold_jacobian,
    isometry_defect,
    standard_vertex_map,
    vertex_contraction,
)
from .errors import (
    DegenerateQuadrupleError,
    DomainError,
    DuplicateEdgeError,
    MeshError,
    MissingKappaError,
    NonpositiveLengthError,
    ParseError,
    RealizationError,
    UnknownVertexError,
)
from .mesh import PolyMesh, load_off, parse_off
from .qcbounds import (
    DihedralWedgeSpec,
    DilatationBounds,
    EdgeAngleReport,
    MonteCarloEstimate,
    convex_face_count_bound,
    dihedral_wedge_coefficients,
    folding_dilatation,
    mesh_edge_dilatation_bound,
    normalized_exterior_angle,
    normalized_link_volume,
    normalized_link_volume_mc,
    uniform_index_bound,
)
from .quadruple import (
    EmbeddabilityCertificate,
    MetricQuadruple,
    WaldOptions,
    WaldResult,
    WaldRoot,
    cayley_menger,
    nondegenerate,
    realize_quadruple,
    s3_embeddability,
    vertex_excess,
    wald_curvature,
)
from .skeleton import (
    CompatibilityReport,
    CurveTriple,
    LocalReport,
    MetricGraph,
    QuadrupleCheck,
    StarQuadruple,
    global_compatibility,
    local_compatibility,
    parse_graph_document,
    parse_metric_graph,
    polyline_curvature,
    region_of_curvature,
    star_quadruples,
)
from .spaceform import (
    MetricTriple,
    ModelTriangle,
    comparison_angle,
    geodesic_distance,
    measured_angle,
    perimeter_limit,
    realize_distances,
    realize_triple,
    triple_embeddable,
)

__version__ = "0.1.0"

__all__ = [
    "AcuteTriangle",
    "CompatibilityReport",
    "CurveTriple",
    "DefectReport",
    "DegenerateQuadrupleError",
    "DihedralWedgeSpec",
    "DilatationBounds",
    "DomainError",
    "DuplicateEdgeError",
    "EdgeAngleReport",
    "EmbeddabilityCertificate",
    "FoldParams",
    "LocalReport",
    "MeshError",
    "MetricGraph",
    "MetricQuadruple",
    "MetricTriple",
    "MissingKappaError",
    "ModelTriangle",
    "MonteCarloEstimate",
    "NonpositiveLengthError",
    "ParseError",
    "PleatedElement",
    "PolyMesh",
    "QuadrupleCheck",
    "RealizationError",
    "StarQuadruple",
    "UnknownVertexError",
    "WaldOptions",
    "WaldResult",
    "WaldRoot",
    "canonical_element",
    "cayley_menger",
    "comparison_angle",
    "convex_face_count_bound",
    "dihedral_wedge_coefficients",
    "fold_jacobian",
    "folding_dilatation",
    "geodesic_distance",
    "global_compatibility",
    "isometry_defect",
    "load_off",
    "local_compatibility",
    "measured_angle",
    "mesh_edge_dilatation_bound",
    "nondegenerate",
    "normalized_exterior_angle",
    "normalized_link_volume",
    "normalized_link_volume_mc",
    "parse_graph_document",
    "parse_metric_graph",
    "parse_off",
    "perimeter_limit",
    "polyline_curvature",
    "realize_distances",
    "realize_quadruple",
    "realize_triple",
    "region_of_curvature",
    "s3_embeddability",
    "standard_vertex_map",
    "star_quadruples",
    "triple_embeddable",
    "uniform_index_bound",
    "vertex_contraction",
    "vertex_excess",
    "wald_curvature",
]
