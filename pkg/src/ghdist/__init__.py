"""Hausdorff distance, its set-valued decomposition and generalized
Hausdorff-type distances on finite metric spaces, with exhaustive axiom
auditing."""

__version__ = "0.1.0"

from .algebra import (
    AlgebraError,
    Interval,
    PartialAlgebra,
    Postmeasure,
    check_partial_algebra,
    check_postmeasure,
    compose_metric,
    powerset_algebra,
    sup_algebra,
)
from .audit import AuditReport, AxiomReport, DistanceFn, UndefinedDistance, Violation, audit_distance
from .geo import GluingSpace, embed_distance, gh_distance, isometric
from .hyperpath import GridSample, HyperGraph, MoveRule, build_hypergraph, dm_distance, grid_sample
from .integral import (
    DiscreteMeasureSpace,
    IndexedSet,
    Kernel,
    check_kernel_conditions,
    check_welldefined,
    coupled_integral_distance,
    extended_distance,
    lambda_bound,
    lp_integral_distance,
    unorder,
    weighted_integral_distance,
)
from .metric import (
    FiniteMetricSpace,
    MetricError,
    PointSet,
    closed_neighborhood,
    dist_point_set,
    hausdorff,
    quasimetric_to_metric,
    semimetric_to_pseudometric,
    uniform_metric,
)
from .relational import (
    Relation,
    canonical_RH,
    check_lr_chain_condition,
    check_ti_criterion,
    cur_distance,
    is_complete,
    is_intersection_complete,
    lr_distance,
    ur_distance,
)
from .svmetric import (
    FiniteTopology,
    SvMetric,
    check_sv_metric,
    dsv_complement_threshold,
    dsv_values,
    sv_ball,
    sv_topology,
    symmetric_difference_sv,
    verify_decomposition,
)

__all__ = [name for name in dir() if not name.startswith("_")]
