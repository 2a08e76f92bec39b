"""Directed triangle motif census, evolution tracking, and context stats."""

__version__ = "0.1.0"

from .graph import (EARTH_RADIUS_KM, GraphDataError, NodeDictionary, PairState,
                    Profile, ResourceError, Snapshot, SnapshotSequence,
                    load_profiles, load_snapshot, utc_offset)
from .triads import (CODES, NOT_CONNECTED, TYPE0, TriadClass,
                     TriadConfiguration, TypeMappingTable, arc_delta,
                     canonicalize, classify)
from .census import CensusResult, census, enumerate_triangles, triangle_set
from .sampling import (SamplePlan, draw_seeds, filter_by_location,
                       reuse_seeds, sample_triangle_graph)
from .evolution import (ChangeSummary, TransitionMatrix, TripleTrajectory,
                        build_universe, change_summary, classify_triple,
                        trajectories, trajectory, transition_matrix)
from .context import (DegreeReport, DegreeSeries, DistanceSummary, GeoStats,
                      TimezoneStats, degree_report, haversine,
                      timezone_of, timezone_spread, triangle_geo_stats)

__all__ = [
    "EARTH_RADIUS_KM", "GraphDataError", "NodeDictionary", "PairState",
    "Profile", "ResourceError", "Snapshot", "SnapshotSequence",
    "load_profiles", "load_snapshot", "utc_offset",
    "CODES", "NOT_CONNECTED", "TYPE0", "TriadClass", "TriadConfiguration",
    "TypeMappingTable", "arc_delta", "canonicalize", "classify",
    "CensusResult", "census", "enumerate_triangles", "triangle_set",
    "SamplePlan", "draw_seeds", "filter_by_location", "reuse_seeds",
    "sample_triangle_graph",
    "ChangeSummary", "TransitionMatrix", "TripleTrajectory",
    "build_universe", "change_summary", "classify_triple", "trajectories",
    "trajectory", "transition_matrix",
    "DegreeReport", "DegreeSeries", "DistanceSummary", "GeoStats",
    "TimezoneStats", "degree_report", "haversine", "timezone_of",
    "timezone_spread", "triangle_geo_stats",
]
