"""Sampling pipeline and triangle evolution between snapshots.

Simulates two snapshots of a churning network, reduces them with the
seed-based triangle-graph sampler, then tracks every triple that is a
triangle in at least one snapshot. Triples that are not currently a
triangle carry type 0, so creations and dissolutions appear as moves
from and to type 0.
"""

import numpy as np

from trimotif import (SamplePlan, Snapshot, change_summary,
                      draw_seeds, sample_triangle_graph, trajectories,
                      transition_matrix)

rng = np.random.default_rng(7)
n = 300


def random_edges(n_edges):
    src = rng.integers(0, n, size=n_edges)
    dst = rng.integers(0, n, size=n_edges)
    return set(zip(src.tolist(), dst.tolist())) - {(v, v) for v in range(n)}


def snap(label, edges):
    arr = np.array(sorted(edges), dtype=np.int64)
    return Snapshot.from_arrays(label, arr[:, 0], arr[:, 1], n,
                                extra_nodes=np.arange(n))


# Second snapshot: drop a third of the edges, add fresh ones.
edges1 = random_edges(2400)
kept = {e for e in edges1 if rng.random() > 0.33}
edges2 = kept | random_edges(800)
s1, s2 = snap("T1", edges1), snap("T2", edges2)

# Seeds are drawn once on the first snapshot and reused on the second,
# so both reductions cover the same neighborhoods.
plan = SamplePlan(seed_count=40, rng_seed=11, location_filter=False)
seeds = draw_seeds(s1, plan)
g1, _ = sample_triangle_graph(s1, plan, seeds=seeds)
g2, _ = sample_triangle_graph(s2, plan, seeds=seeds)
for full, g in ((s1, g1), (s2, g2)):
    print(f"{full.label}: {full.node_count} nodes -> triangle graph "
          f"{g.node_count} nodes / {g.edge_count} edges")

# Track every triple that is a triangle somewhere in the sequence.
trajs = trajectories([g1, g2])
print(f"\ntracked universe: {len(trajs)} triples")

m = transition_matrix(trajs, 0, 1, include_type0=True)
print(f"transition total {m.total} (equals universe size)")
print("\nbubble cells > 0.5% of all transitions (origin -> destination):")
for o, d, pct in m.bubble_table("overall", threshold=0.5):
    print(f"  {o:>2} -> {d:>2}  {pct:6.2f}%")

summary = change_summary(trajs)
print(f"\nchanged: {100 * summary.changed_fraction:.1f}% of tracked triples")
print(f"of the changed transitions, {100 * summary.less_connected_fraction:.1f}% "
      f"lost arcs and {100 * summary.dissolution_fraction:.1f}% dissolved")
