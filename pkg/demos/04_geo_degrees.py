"""Geographic and degree context of triangles.

Loads the bundled toy fixture (two snapshots plus lat/lon profiles),
then reports pairwise distances, timezone windows, degree
distributions per reduction stage, and top in-degree "superstars".
"""

from pathlib import Path

from trimotif.graph import ProfileLoadReport
from trimotif import (NodeDictionary, SamplePlan, degree_report,
                      enumerate_triangles, filter_by_location, haversine,
                      load_profiles, load_snapshot, sample_triangle_graph,
                      timezone_of, timezone_spread, trajectories,
                      triangle_geo_stats)

fixture = Path(__file__).resolve().parent.parent / "tests/data/fixture"

nodes = NodeDictionary()
s1 = load_snapshot(str(fixture / "s1.edges"), nodes, label="S1")
s2 = load_snapshot(str(fixture / "s2.edges"), nodes, label="S2")
report = ProfileLoadReport()
profiles = load_profiles(str(fixture / "profiles.csv"), nodes, report)
print(f"profiles: {report.loaded} loaded, {report.rejected} rejected, "
      f"{report.unknown_ids} for unknown ids")

berlin = profiles[nodes.lookup("alice")]
london = profiles[nodes.lookup("dave")]
d = haversine((berlin.latitude, berlin.longitude),
              (london.latitude, london.longitude))
print(f"alice-dave distance: {d:.1f} km, "
      f"timezones {timezone_of(berlin)} vs {timezone_of(london)}")

# Distance statistics over the triangles of the first snapshot.
triangles = list(enumerate_triangles(s1))
geo = triangle_geo_stats(s1, triangles, profiles)
print(f"\n{geo.triangles_used} triangles fully profiled, "
      f"{geo.triangles_skipped} skipped")
for code, summary in geo.per_type_triangle_mean.items():
    if summary.count:
        print(f"  {code}: mean member distance {summary.mean:.1f} km "
              f"over {summary.count} triangle(s)")

# How many triangles fit in 1 or 3 consecutive timezones?
tz = timezone_spread(triangles, profiles, windows=(1, 3))
for code, total in tz.per_type_total.items():
    if total:
        print(f"  {code}: {tz.percent_within(1, code):.0f}% within 1 zone, "
              f"{tz.percent_within(3, code):.0f}% within 3 zones")

# Degree context across the reduction stages.
plan = SamplePlan(seed_count=4, rng_seed=0)
loc1 = filter_by_location(s1, profiles)
tri1, seeds = sample_triangle_graph(loc1, plan)
loc2 = filter_by_location(s2, profiles)
tri2, _ = sample_triangle_graph(loc2, plan, seeds=seeds)
trajs = trajectories([tri1, tri2])
rep = degree_report(s1, {"locations-only": loc1, "triangle-graph": tri1},
                    trajs=trajs, origin_snapshot=tri1, top_n=3)
print("\nmax out-degree per stage:")
for stage, series in rep.stages.items():
    top = int(series["out"].values[-1]) if len(series["out"].values) else 0
    print(f"  {stage}: {top}")
print("superstars (top in-degree, with follower retention):")
for row in rep.superstars:
    kept = ", ".join(f"{name} {pct:.0f}%"
                     for name, pct in row.retention_percent.items())
    print(f"  #{row.rank} {nodes.raw(row.node)}: "
          f"{row.followers_full} followers ({kept})")
