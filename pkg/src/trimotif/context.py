"""Geographic, timezone, and degree context statistics for triangles."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .graph import EARTH_RADIUS_KM, Profile, Snapshot, utc_offset
from .triads import CODES, MUTUAL_COUNT, TriadClass, TypeMappingTable
from .evolution import TripleTrajectory, Triple

TriangleList = list[tuple[Triple, TriadClass]]


def haversine(a: tuple[float, float], b: tuple[float, float]) -> float:
    """Great-circle distance in km between two (lat, lon) points."""
    lat1, lon1, lat2, lon2 = map(math.radians, (a[0], a[1], b[0], b[1]))
    dlat = lat2 - lat1
    dlon = lon2 - lon1
    h = math.sin(dlat / 2) ** 2 + math.cos(lat1) * math.cos(lat2) * math.sin(dlon / 2) ** 2
    return 2.0 * EARTH_RADIUS_KM * math.asin(min(1.0, math.sqrt(h)))


def timezone_of(p: Profile) -> int:
    """Integer UTC offset derived from the profile longitude."""
    return utc_offset(p.longitude)


@dataclass
class DistanceSummary:
    """Plot-free summary of one distance population."""

    count: int
    mean: float
    median: float
    q1: float
    q3: float

    @classmethod
    def of(cls, values: list[float]) -> "DistanceSummary":
        if not values:
            return cls(0, float("nan"), float("nan"), float("nan"), float("nan"))
        arr = np.asarray(values)
        q1, med, q3 = np.percentile(arr, [25, 50, 75])
        return cls(len(values), float(arr.mean()), float(med), float(q1), float(q3))


def distance_cdf(values: list[float]) -> tuple[np.ndarray, np.ndarray]:
    """(sorted values, cumulative fraction) pairs; empty input -> empty."""
    if not values:
        return np.empty(0), np.empty(0)
    arr = np.sort(np.asarray(values, dtype=float))
    frac = np.arange(1, len(arr) + 1, dtype=float) / len(arr)
    return arr, frac


@dataclass
class GeoStats:
    """Distance statistics over triangles with fully profiled members."""

    per_type_triangle_mean: dict[str, DistanceSummary]
    per_type_symmetric_link: dict[str, DistanceSummary]
    cdf_profiled_edges: tuple[np.ndarray, np.ndarray]
    cdf_triangle_edges: tuple[np.ndarray, np.ndarray]
    cdf_triangle_pairs: tuple[np.ndarray, np.ndarray]
    triangles_used: int = 0
    triangles_skipped: int = 0  # at least one member unprofiled


def triangle_geo_stats(s: Snapshot, triangles: TriangleList,
                       profiles: dict[int, Profile]) -> GeoStats:
    """Per-type distance aggregates plus the three comparison CDFs.

    Pairs inside a triangle count toward distances whether or not an
    edge connects them; symmetric-link distances cover only mutual
    pairs, so types without a mutual link have an empty summary.
    """
    per_type_means: dict[str, list[float]] = {c: [] for c in CODES}
    per_type_sym: dict[str, list[float]] = {c: [] for c in CODES}
    tri_edge_d: list[float] = []
    tri_pair_d: list[float] = []
    used = skipped = 0

    for triple, cls in triangles:
        ps = [profiles.get(v) for v in triple]
        if any(p is None for p in ps):
            skipped += 1
            continue
        used += 1
        dists = []
        for i, j in ((0, 1), (0, 2), (1, 2)):
            d = haversine((ps[i].latitude, ps[i].longitude),
                          (ps[j].latitude, ps[j].longitude))
            dists.append(d)
            tri_pair_d.append(d)
            state = s.pair_state(triple[i], triple[j])
            if state:
                tri_edge_d.append(d)
            if state == 3:  # mutual
                per_type_sym[cls.canonical_code].append(d)
        per_type_means[cls.canonical_code].append(sum(dists) / 3.0)

    edge_d: list[float] = []
    seen: set[tuple[int, int]] = set()
    for u, v in s.iter_edges():
        key = (min(u, v), max(u, v))
        if key in seen:
            continue
        seen.add(key)
        pu, pv = profiles.get(u), profiles.get(v)
        if pu is not None and pv is not None:
            edge_d.append(haversine((pu.latitude, pu.longitude),
                                    (pv.latitude, pv.longitude)))

    return GeoStats(
        per_type_triangle_mean={c: DistanceSummary.of(v)
                                for c, v in per_type_means.items()},
        per_type_symmetric_link={c: DistanceSummary.of(per_type_sym[c])
                                 for c in CODES if MUTUAL_COUNT[c] >= 1},
        cdf_profiled_edges=distance_cdf(edge_d),
        cdf_triangle_edges=distance_cdf(tri_edge_d),
        cdf_triangle_pairs=distance_cdf(tri_pair_d),
        triangles_used=used, triangles_skipped=skipped)


@dataclass
class TimezoneStats:
    """Per-type counts of triangles confined to narrow timezone windows."""

    windows: tuple[int, ...]
    per_type_total: dict[str, int]
    within: dict[int, dict[str, int]]           # window k -> code -> count
    per_type_zone_histogram: dict[str, dict[int, int]]
    triangles_skipped: int = 0

    def percent_within(self, k: int, code: str) -> float:
        total = self.per_type_total.get(code, 0)
        return 100.0 * self.within[k][code] / total if total else 0.0


def zones_fit_window(zones: list[int], k: int) -> bool:
    """True when all zones fit in k consecutive timezones, mod 24."""
    uniq = sorted({z % 24 for z in zones})
    if len(uniq) == 1:
        return k >= 1
    gaps = [uniq[i + 1] - uniq[i] for i in range(len(uniq) - 1)]
    gaps.append(uniq[0] + 24 - uniq[-1])
    span = 24 - max(gaps)
    return span <= k - 1


def timezone_spread(triangles: TriangleList, profiles: dict[int, Profile],
                    windows: tuple[int, ...] = (1, 3)) -> TimezoneStats:
    per_type_total: dict[str, int] = {c: 0 for c in CODES}
    within = {k: {c: 0 for c in CODES} for k in windows}
    histo: dict[str, dict[int, int]] = {c: {} for c in CODES}
    skipped = 0
    for triple, cls in triangles:
        ps = [profiles.get(v) for v in triple]
        if any(p is None for p in ps):
            skipped += 1
            continue
        zones = [timezone_of(p) for p in ps]
        code = cls.canonical_code
        per_type_total[code] += 1
        for z in zones:
            histo[code][z] = histo[code].get(z, 0) + 1
        for k in windows:
            if zones_fit_window(zones, k):
                within[k][code] += 1
    return TimezoneStats(tuple(windows), per_type_total, within, histo,
                         triangles_skipped=skipped)


@dataclass
class DegreeSeries:
    """Degree distribution as matched CDF/CCDF support series."""

    values: np.ndarray     # sorted distinct degrees
    cdf: np.ndarray        # P(X <= value)
    ccdf: np.ndarray       # P(X >= value)

    @classmethod
    def of(cls, degrees: np.ndarray) -> "DegreeSeries":
        if len(degrees) == 0:
            return cls(np.empty(0, int), np.empty(0), np.empty(0))
        values, counts = np.unique(degrees, return_counts=True)
        n = counts.sum()
        cum = np.cumsum(counts)
        cdf = cum / n
        ccdf = 1.0 - np.concatenate(([0.0], cdf[:-1]))
        return cls(values, cdf, ccdf)


@dataclass
class SuperstarRow:
    node: int
    rank: int
    followers_full: int
    retention_percent: dict[str, float]  # reduction name -> percent


@dataclass
class DegreeReport:
    """Degree distributions per reduction stage plus context groupings."""

    stages: dict[str, dict[str, DegreeSeries]]  # stage -> {"in","out"} -> series
    outdegree_by_transition: dict[str, DegreeSeries]  # win / lose / stable
    superstars: list[SuperstarRow]


def degree_series(s: Snapshot) -> dict[str, DegreeSeries]:
    in_deg = np.diff(s.in_indptr)[s.node_ids]
    out_deg = np.diff(s.out_indptr)[s.node_ids]
    return {"in": DegreeSeries.of(in_deg), "out": DegreeSeries.of(out_deg)}


def _transition_groups(trajs: dict[Triple, TripleTrajectory], origin: int,
                       destination: int, mapping: TypeMappingTable
                       ) -> dict[str, set[int]]:
    """Triangle member nodes grouped by the arc-count change of their triple."""
    from .triads import ARC_COUNT
    arcs = {0: 0}
    arcs.update({t: ARC_COUNT[mapping.code_of(t)] for t in range(1, 14)})
    groups: dict[str, set[int]] = {"win": set(), "lose": set(), "stable": set()}
    for tr in trajs.values():
        o, d = tr.types[origin], tr.types[destination]
        delta = arcs[d] - arcs[o]
        if delta > 0:
            key = "win"
        elif delta < 0:
            key = "lose"
        elif o == d:
            key = "stable"
        else:
            continue  # same arc count, different type: neither wins nor loses
        groups[key].update(tr.triple)
    return groups


def superstars(full: Snapshot, reductions: dict[str, Snapshot],
               top_n: int = 10) -> list[SuperstarRow]:
    """Top-in-degree nodes of the full graph with follower retention."""
    in_deg = np.diff(full.in_indptr)
    order = np.lexsort((np.arange(full.n_ids), -in_deg))[:top_n]
    rows = []
    for rank, v in enumerate(order, start=1):
        followers = set(int(x) for x in full.in_neighbors(int(v)))
        retention = {}
        for name, red in reductions.items():
            if red.has_node(int(v)):
                kept = followers & set(int(x) for x in red.in_neighbors(int(v)))
            else:
                kept = set()
            retention[name] = 100.0 * len(kept) / len(followers) if followers else 0.0
        rows.append(SuperstarRow(int(v), rank, len(followers), retention))
    return rows


def degree_report(full: Snapshot, reductions: dict[str, Snapshot],
                  trajs: dict[Triple, TripleTrajectory] | None = None,
                  origin: int = 0, destination: int = -1,
                  origin_snapshot: Snapshot | None = None,
                  mapping: TypeMappingTable | None = None,
                  top_n: int = 10) -> DegreeReport:
    """Assemble the sampling-bias and transition-degree diagnostics.

    ``reductions`` maps stage names (e.g. "locations-only",
    "triangle-graph") to the reduced snapshots; the full snapshot is
    always reported under "full". Out-degrees of win/lose/stable triangle
    members are read from ``origin_snapshot`` (default: the full graph).
    """
    if mapping is None:
        mapping = TypeMappingTable.default()
    stages = {"full": degree_series(full)}
    for name, snap in reductions.items():
        stages[name] = degree_series(snap)

    by_transition: dict[str, DegreeSeries] = {}
    if trajs:
        n_snaps = len(next(iter(trajs.values())).types)
        if destination < 0:
            destination += n_snaps
        src = origin_snapshot or full
        for name, members in _transition_groups(trajs, origin, destination,
                                                mapping).items():
            degs = np.array([src.degrees(v)[1] for v in sorted(members)
                             if src.has_node(v)], dtype=np.int64)
            by_transition[name] = DegreeSeries.of(degs)

    return DegreeReport(stages, by_transition,
                        superstars(full, reductions, top_n=top_n))
