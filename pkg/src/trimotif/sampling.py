"""Snapshot reduction pipeline: location filter, random seeds, closure.

Mirrors a three-stage reduction: drop nodes without geo profiles, pick
seed nodes uniformly at random, then keep exactly the nodes and edges of
every weakly-connected triple touching a seed (the "triangle graph").
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import GraphDataError, Profile, Snapshot, SnapshotSequence


@dataclass(frozen=True)
class SamplePlan:
    """Reproducible sampling parameters."""

    seed_count: int = 100
    rng_seed: int = 0
    location_filter: bool = True

    def __post_init__(self) -> None:
        if self.seed_count < 1:
            raise GraphDataError("seed_count must be >= 1")


def filter_by_location(s: Snapshot, profiles: dict[int, Profile]) -> Snapshot:
    """Subgraph induced on nodes that have a geographic profile."""
    keep = np.zeros(s.n_ids, dtype=bool)
    for nid in profiles:
        if 0 <= nid < s.n_ids:
            keep[nid] = True
    members = s.node_ids[keep[s.node_ids]]
    src = np.repeat(np.arange(s.n_ids), np.diff(s.out_indptr))
    dst = s.out_indices
    ok = keep[src] & keep[dst]
    return Snapshot.from_arrays(s.label, src[ok], dst[ok], s.n_ids,
                                extra_nodes=members)


def draw_seeds(s: Snapshot, plan: SamplePlan) -> np.ndarray:
    """Seed nodes drawn uniformly without replacement, deterministically."""
    if plan.seed_count > s.node_count:
        raise GraphDataError(
            f"seed_count {plan.seed_count} exceeds node count {s.node_count}")
    rng = np.random.default_rng(plan.rng_seed)
    return np.sort(rng.choice(s.node_ids, size=plan.seed_count, replace=False))


def _triples_through(s: Snapshot, x: int) -> set[tuple[int, int, int]]:
    """All weakly-connected triples containing node x."""
    out: set[tuple[int, int, int]] = set()
    nbrs = s.undirected_neighbors(x)
    # x is a center: any pair of its neighbors.
    for i in range(len(nbrs)):
        u = int(nbrs[i])
        for j in range(i + 1, len(nbrs)):
            out.add(tuple(sorted((x, u, int(nbrs[j])))))
        # a neighbor is the center: x - u - w paths.
        for w in s.undirected_neighbors(u):
            w = int(w)
            if w != x:
                out.add(tuple(sorted((x, u, w))))
    return out


def sample_triangle_graph(s: Snapshot, plan: SamplePlan,
                          seeds: np.ndarray | None = None
                          ) -> tuple[Snapshot, np.ndarray]:
    """Triangle-graph closure of a seed set.

    The result contains exactly the nodes and (directed) edges of every
    weakly-connected triple that includes at least one seed. Seeds that
    sit in no triple are dropped from the output graph.
    """
    if seeds is None:
        seeds = draw_seeds(s, plan)
    triples: set[tuple[int, int, int]] = set()
    for x in seeds:
        triples |= _triples_through(s, int(x))
    edges: set[tuple[int, int]] = set()
    nodes: set[int] = set()
    for a, b, c in triples:
        nodes.update((a, b, c))
        for u, v in ((a, b), (a, c), (b, c)):
            if s.has_edge(u, v):
                edges.add((u, v))
            if s.has_edge(v, u):
                edges.add((v, u))
    if edges:
        arr = np.array(sorted(edges), dtype=np.int64)
        src, dst = arr[:, 0], arr[:, 1]
    else:
        src = dst = np.empty(0, dtype=np.int64)
    return (Snapshot.from_arrays(s.label, src, dst, s.n_ids,
                                 extra_nodes=sorted(nodes)), seeds)


def reuse_seeds(sequence: SnapshotSequence, plan: SamplePlan,
                profiles: dict[int, Profile] | None = None
                ) -> tuple[list[Snapshot], np.ndarray]:
    """Apply one seed set, drawn from the first snapshot, to all snapshots.

    With ``plan.location_filter`` the filter runs before seeding and the
    closure is computed on the filtered snapshots.
    """
    snaps = list(sequence.snapshots)
    if plan.location_filter:
        if profiles is None:
            raise GraphDataError("location_filter requires profiles")
        snaps = [filter_by_location(s, profiles) for s in snaps]
    seeds = draw_seeds(snaps[0], plan)
    return [sample_triangle_graph(s, plan, seeds=seeds)[0] for s in snaps], seeds
