"""Spatial preferential attachment graphs: generation and theory checks.

geometry       torus metric, ball volume/radius conversions
spatial_index  leveled grid answering sphere-of-influence coverage queries
rng            counter-based uniform streams (reproducibility contract)
generator      the growth process, indexed and naive reference variants
clustering     local clustering coefficients, old/new split, curves
stats          degree censuses, power-law fit, trajectory concentration
graph_io       graph files, manifests, run configs, CSV reports
verify         exact equivalence harness between the two generators
cli            the spa-model command line tool
"""

from ._version import __version__
from .errors import (
    ParameterError,
    ParseError,
    SpaError,
    UsageError,
    VerificationError,
)
from .geometry import Norm, radius_to_volume, torus_distance, volume_to_radius
from .generator import GrownGraph, ModelParams, generate, generate_naive, sphere_volume
from .spatial_index import SphereIndex
from .clustering import (
    ClusteringReport,
    SplitPolicy,
    banded_curve,
    clustering_curve,
    compute_report,
    global_clustering,
    local_clustering_directed,
    local_clustering_undirected,
    old_new_split,
    scatter_export,
)
from .stats import (
    DegreeCensus,
    ExponentFit,
    TheoryConstants,
    TrajectoryCheck,
    ball_census,
    ball_centers_grid,
    curve_slope,
    degree_census,
    fixed_slope_fit,
    powerlaw_exponent,
    theory_constants,
    trajectory_check,
)
from .verify import VerifyReport, verify_equivalence

__all__ = [
    "__version__",
    "SpaError", "ParameterError", "UsageError", "ParseError", "VerificationError",
    "Norm", "torus_distance", "volume_to_radius", "radius_to_volume",
    "ModelParams", "GrownGraph", "generate", "generate_naive", "sphere_volume",
    "SphereIndex",
    "SplitPolicy", "ClusteringReport", "compute_report", "clustering_curve",
    "banded_curve", "scatter_export", "global_clustering",
    "local_clustering_directed", "local_clustering_undirected", "old_new_split",
    "TheoryConstants", "DegreeCensus", "ExponentFit", "TrajectoryCheck",
    "theory_constants", "degree_census", "ball_census", "ball_centers_grid",
    "powerlaw_exponent", "trajectory_check", "curve_slope", "fixed_slope_fit",
    "VerifyReport", "verify_equivalence",
]
