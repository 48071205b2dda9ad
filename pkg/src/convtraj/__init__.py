"""convtraj: convex hulls of trajectories of polynomial dynamical systems.

Sample a trajectory, take the convex hull of the sample, stratify the hull
boundary into patches that approximate faces of the limit body, and classify
each detected face by the sign of the field against the outward normal to
decide whether the hull is forward-closed.
"""

from .errors import (
    BadInputError,
    ConvtrajError,
    DegenerateSpanError,
    IdenticallyZeroError,
    InfeasibleError,
    IntegrationError,
    NumericalError,
    UnboundedError,
)
from .hull import PolytopeData, convex_hull_molp
from .partition import (
    EdgePartition,
    FacePartition,
    PartitionReport,
    classify_edge,
    classify_face,
    outward_restart,
    partition_boundary,
)
from .patches import (
    FaceTuple,
    Patch,
    PatchMetricCache,
    PatchReport,
    delta_plateau_scan,
    detect_arcs_edges_2d,
    detect_patches,
    facet_graph,
    hausdorff_facets,
)
from .pipeline import (
    CensusResult,
    PipelineResult,
    RunReport,
    SystemSpec,
    census,
    pipeline,
    run_example,
    sample_system,
    vertex_sample_indices,
)
from .poly import Polynomial, parse_polynomial, polynomial_to_text
from .presets import preset_names, preset_spec_kwargs
from .quickhull import quickhull_oracle
from .sampler import (
    CurveSample,
    affine_span_reduce,
    decimate_curve,
    estimate_epsilon,
    integrate,
    reduce_field,
    sample_parametric,
)
from .systems import (
    ReactionNetwork,
    TrigCurve,
    VectorField,
    crn_field,
    hamiltonian_field,
    jacobian_minor_field,
    linear_field,
    parse_network,
    trig_points,
    weakly_reversible,
)

__version__ = "0.1.0"

__all__ = [
    "BadInputError",
    "CensusResult",
    "ConvtrajError",
    "CurveSample",
    "DegenerateSpanError",
    "EdgePartition",
    "FacePartition",
    "FaceTuple",
    "IdenticallyZeroError",
    "InfeasibleError",
    "IntegrationError",
    "NumericalError",
    "Patch",
    "PatchMetricCache",
    "PatchReport",
    "PartitionReport",
    "PipelineResult",
    "Polynomial",
    "PolytopeData",
    "ReactionNetwork",
    "RunReport",
    "SystemSpec",
    "TrigCurve",
    "UnboundedError",
    "VectorField",
    "affine_span_reduce",
    "census",
    "classify_edge",
    "classify_face",
    "convex_hull_molp",
    "crn_field",
    "decimate_curve",
    "delta_plateau_scan",
    "detect_arcs_edges_2d",
    "detect_patches",
    "estimate_epsilon",
    "facet_graph",
    "hamiltonian_field",
    "hausdorff_facets",
    "integrate",
    "jacobian_minor_field",
    "linear_field",
    "outward_restart",
    "parse_network",
    "parse_polynomial",
    "partition_boundary",
    "pipeline",
    "polynomial_to_text",
    "preset_names",
    "preset_spec_kwargs",
    "quickhull_oracle",
    "reduce_field",
    "run_example",
    "sample_parametric",
    "sample_system",
    "trig_points",
    "vertex_sample_indices",
    "weakly_reversible",
]
