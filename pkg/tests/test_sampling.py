import itertools

import numpy as np
import pytest

from trimotif import (GraphDataError, NodeDictionary, Profile, SamplePlan,
                      SnapshotSequence, draw_seeds, filter_by_location,
                      reuse_seeds, sample_triangle_graph, triangle_set)

import oracles


def profiles_for(nodes):
    return {v: Profile(v, float(v % 90), float(v % 90)) for v in nodes}


def closure_oracle(nodes, edges, seeds):
    """Brute-force seed-triangle closure: nodes and edges of every
    weakly-connected triple touching a seed."""
    seeds = set(int(x) for x in seeds)
    keep_nodes, keep_edges = set(), set()
    for triple, _ in oracles.all_triangles(nodes, edges).items():
        if not seeds & set(triple):
            continue
        keep_nodes.update(triple)
        for a, b in itertools.permutations(triple, 2):
            if (a, b) in edges:
                keep_edges.add((a, b))
    return keep_nodes, keep_edges


def graph_of(s):
    return (set(int(v) for v in s.node_ids), set(s.iter_edges()))


class TestFilterByLocation:
    def test_all_profiled_is_identity(self):
        nodes, edges = [0, 1, 2], {(0, 1), (1, 2)}
        s = oracles.snapshot_from_edges("S", nodes, edges)
        f = filter_by_location(s, profiles_for(nodes))
        assert graph_of(f) == (set(nodes), edges)

    def test_none_profiled_is_empty(self):
        s = oracles.snapshot_from_edges("S", [0, 1], {(0, 1)})
        f = filter_by_location(s, {})
        assert f.node_count == 0 and f.edge_count == 0

    def test_induced_subgraph_hand_check(self):
        # 4 nodes, 2 profiled, 1 edge between them
        s = oracles.snapshot_from_edges("S", [0, 1, 2, 3],
                                        {(0, 1), (1, 2), (2, 3)})
        f = filter_by_location(s, profiles_for([1, 2]))
        assert graph_of(f) == ({1, 2}, {(1, 2)})


class TestSampleTriangleGraph:
    def test_seed_in_single_triangle_path(self):
        nodes, edges = [0, 1, 2], {(0, 1), (1, 2)}
        s = oracles.snapshot_from_edges("S", nodes, edges)
        tg, seeds = sample_triangle_graph(s, SamplePlan(1, rng_seed=4))
        assert graph_of(tg) == ({0, 1, 2}, edges)

    def test_seed_without_triangle_dropped(self):
        # node 3 is isolated from the path 0-1-2
        nodes, edges = [0, 1, 2, 3], {(0, 1), (1, 2), (3, 0)}
        s = oracles.snapshot_from_edges("S", nodes, edges)
        tg, _ = sample_triangle_graph(s, SamplePlan(1), seeds=np.array([3]))
        # 3 is in triangles {3,0,1} via center 0; check against oracle
        n, e = closure_oracle(nodes, edges, [3])
        assert graph_of(tg) == (n, e)

    def test_isolated_seed_yields_empty_graph(self):
        nodes, edges = [0, 1, 2, 3], {(0, 1), (1, 2)}
        s = oracles.snapshot_from_edges("S", nodes, edges)
        tg, _ = sample_triangle_graph(s, SamplePlan(1), seeds=np.array([3]))
        assert tg.node_count == 0 and tg.edge_count == 0

    def test_random_graphs_match_brute_force_closure(self):
        rng = np.random.default_rng(21)
        for trial in range(20):
            nodes, edges = oracles.random_digraph(rng, 20, 0.12)
            s = oracles.snapshot_from_edges(f"S{trial}", nodes, edges)
            tg, seeds = sample_triangle_graph(s, SamplePlan(3, rng_seed=trial))
            assert graph_of(tg) == closure_oracle(nodes, edges, seeds)

    def test_identical_rng_seed_reproduces_identical_sample(self):
        rng = np.random.default_rng(8)
        nodes, edges = oracles.random_digraph(rng, 25, 0.15)
        s1 = oracles.snapshot_from_edges("S", nodes, edges)
        s2 = oracles.snapshot_from_edges("S", nodes, edges)
        tg1, seeds1 = sample_triangle_graph(s1, SamplePlan(5, rng_seed=99))
        tg2, seeds2 = sample_triangle_graph(s2, SamplePlan(5, rng_seed=99))
        assert np.array_equal(seeds1, seeds2)
        assert graph_of(tg1) == graph_of(tg2)
        assert np.array_equal(tg1.out_indptr, tg2.out_indptr)
        assert np.array_equal(tg1.out_indices, tg2.out_indices)

    def test_sampling_never_invents_triangles(self):
        rng = np.random.default_rng(31)
        nodes, edges = oracles.random_digraph(rng, 18, 0.15)
        s = oracles.snapshot_from_edges("S", nodes, edges)
        tg, seeds = sample_triangle_graph(s, SamplePlan(4, rng_seed=1))
        full = oracles.all_triangles(nodes, edges)
        sampled = oracles.all_triangles(list(range(s.n_ids)),
                                        set(tg.iter_edges()))
        for triple, code in sampled.items():
            if set(triple) & set(int(x) for x in seeds):
                assert full[triple] == code

    def test_seed_containing_triples_preserved_exactly(self):
        rng = np.random.default_rng(17)
        nodes, edges = oracles.random_digraph(rng, 15, 0.2)
        s = oracles.snapshot_from_edges("S", nodes, edges)
        tg, seeds = sample_triangle_graph(s, SamplePlan(3, rng_seed=2))
        seed_set = set(int(x) for x in seeds)
        full = {t for t in triangle_set(s) if set(t) & seed_set}
        sampled = {t for t in triangle_set(tg) if set(t) & seed_set}
        assert full == sampled

    def test_too_many_seeds_rejected(self):
        s = oracles.snapshot_from_edges("S", [0, 1], {(0, 1)})
        with pytest.raises(GraphDataError):
            draw_seeds(s, SamplePlan(5))


class TestReuseSeeds:
    def seq(self, edge_sets):
        d = NodeDictionary()
        for i in range(30):
            d.intern(f"n{i}")
        snaps = [oracles.snapshot_from_edges(f"S{i}", sorted({v for e in es for v in e}),
                                             es, n_ids=30)
                 for i, es in enumerate(edge_sets)]
        return SnapshotSequence(snaps, d)

    def test_edge_completing_triangle_appears_later_only(self):
        seq = self.seq([{(0, 1)}, {(0, 1), (1, 2)}])
        plan = SamplePlan(1, rng_seed=0, location_filter=False)
        graphs, seeds = reuse_seeds(seq, plan)
        # force seed 1 to make the check deterministic
        from trimotif.sampling import sample_triangle_graph
        g1, _ = sample_triangle_graph(seq[0], plan, seeds=np.array([1]))
        g2, _ = sample_triangle_graph(seq[1], plan, seeds=np.array([1]))
        assert triangle_set(g1) == set()
        assert triangle_set(g2) == {(0, 1, 2)}

    def test_same_seed_set_used_everywhere(self):
        seq = self.seq([{(0, 1), (1, 2), (2, 3)},
                        {(0, 1), (1, 2)},
                        {(4, 5)}])
        plan = SamplePlan(2, rng_seed=3, location_filter=False)
        graphs, seeds = reuse_seeds(seq, plan)
        assert len(graphs) == 3
        for g, s in zip(graphs, seq.snapshots):
            expect, _ = sample_triangle_graph(s, plan, seeds=seeds)
            assert graph_of(g) == graph_of(expect)

    def test_four_snapshot_sequence_matches_per_snapshot_oracle(self):
        rng = np.random.default_rng(55)
        edge_sets = []
        nodes, edges = oracles.random_digraph(rng, 20, 0.1)
        for _ in range(4):
            flips = {(int(a), int(b)) for a, b in rng.integers(0, 20, (6, 2))
                     if a != b}
            edges = (edges - flips) | {e for e in flips if rng.random() < 0.5}
            edge_sets.append(set(edges))
        d = NodeDictionary()
        for i in range(20):
            d.intern(f"n{i}")
        snaps = [oracles.snapshot_from_edges(f"S{i}", list(range(20)), es,
                                             n_ids=20)
                 for i, es in enumerate(edge_sets)]
        seq = SnapshotSequence(snaps, d)
        plan = SamplePlan(3, rng_seed=7, location_filter=False)
        graphs, seeds = reuse_seeds(seq, plan)
        for g, es in zip(graphs, edge_sets):
            n, e = closure_oracle(list(range(20)), es, seeds)
            assert graph_of(g) == (n, e)

    def test_location_filter_requires_profiles(self):
        seq = self.seq([{(0, 1)}, {(1, 0)}])
        with pytest.raises(GraphDataError):
            reuse_seeds(seq, SamplePlan(1, rng_seed=0, location_filter=True))
