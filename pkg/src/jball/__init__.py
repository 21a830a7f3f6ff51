"""Distance-ratio metric balls in plane domains."""

from .ballgeom import (
    RegionGrid,
    SphereComponent,
    SphereReport,
    TopologyReport,
    convexity_check,
    extract_region,
    loops_to_svg,
    probe_convexity,
    probe_starlike,
    probe_starlike_nonstrict,
    probe_strict_convexity,
    sphere_components,
    starlikeness_check,
    topology_check,
    trace_boundary,
)
from .domain import (
    BallUnion,
    ConvexPolygon,
    Domain,
    HalfSpace,
    NearestBoundarySet,
    PuncturedSpace,
    SimplePolygon,
    domain_from_json,
    domain_to_json,
)
from .gallery import (
    Expectation,
    Scenario,
    ScenarioOutcome,
    finite_puncture_intersection,
    named_scenarios,
    offcenter_starlikeness,
    qh_nonintersection_demo,
    run_scenario,
    simply_connected_counterexample,
    sphere_vs_closure,
    two_puncture_sharpness,
)
from .geodesics import (
    GeodesicCertificate,
    MidpointGap,
    SegmentDefects,
    equality_witnesses,
    geodesic_certificate,
    no_geodesic_pair,
    radial_pair,
    triangle_defect,
)
from .metric import (
    AnnulusBounds,
    CheckReport,
    annulus_bounds,
    comparison_check,
    exhaustion_radius,
    in_j_ball,
    in_j_ball_many,
    j_distance,
    j_field,
    j_gradient_bound,
    qh_distance,
    qh_distances_from,
    qh_punctured_closed_form,
)
from .punctured import (
    DiskDecomposition,
    Similarity,
    Thresholds,
    annulus_margin,
    canonical_transport,
    disk_decomposition,
    intersection_identity,
    perpendicularity_residual,
    punctured_ball_contains,
    tangency_residual,
    thresholds,
)
from .suite import CriterionResult, run_suite

__version__ = "0.1.0"

__all__ = [
    "AnnulusBounds",
    "BallUnion",
    "CheckReport",
    "ConvexPolygon",
    "CriterionResult",
    "DiskDecomposition",
    "Domain",
    "Expectation",
    "GeodesicCertificate",
    "HalfSpace",
    "MidpointGap",
    "NearestBoundarySet",
    "PuncturedSpace",
    "RegionGrid",
    "Scenario",
    "ScenarioOutcome",
    "SegmentDefects",
    "Similarity",
    "SimplePolygon",
    "SphereComponent",
    "SphereReport",
    "Thresholds",
    "TopologyReport",
    "annulus_bounds",
    "annulus_margin",
    "canonical_transport",
    "comparison_check",
    "convexity_check",
    "disk_decomposition",
    "domain_from_json",
    "domain_to_json",
    "equality_witnesses",
    "exhaustion_radius",
    "extract_region",
    "finite_puncture_intersection",
    "geodesic_certificate",
    "in_j_ball",
    "in_j_ball_many",
    "intersection_identity",
    "j_distance",
    "j_field",
    "j_gradient_bound",
    "loops_to_svg",
    "named_scenarios",
    "no_geodesic_pair",
    "offcenter_starlikeness",
    "perpendicularity_residual",
    "probe_convexity",
    "probe_starlike",
    "probe_starlike_nonstrict",
    "probe_strict_convexity",
    "punctured_ball_contains",
    "qh_distance",
    "qh_distances_from",
    "qh_nonintersection_demo",
    "qh_punctured_closed_form",
    "radial_pair",
    "run_scenario",
    "run_suite",
    "simply_connected_counterexample",
    "sphere_components",
    "sphere_vs_closure",
    "starlikeness_check",
    "tangency_residual",
    "thresholds",
    "topology_check",
    "trace_boundary",
    "triangle_defect",
    "two_puncture_sharpness",
]
