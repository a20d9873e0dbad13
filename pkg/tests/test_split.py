import itertools

import pytest

from hyperlp import (
    Hyperedge,
    Hypergraph,
    PreparedDataset,
    SplitSpec,
    clean_hyperedges,
    clique_expand,
    load_prepared,
    prepare,
    sample_negatives,
    save_prepared,
    structural_split,
    temporal_split,
)
from hyperlp.synth import random_hypergraph

from conftest import A, B, C, D, E


def _timed_chain(times):
    """Disjoint 2-vertex hyperedges, one per timestamp."""
    edges = [Hyperedge(frozenset({2 * i, 2 * i + 1}), time=float(t)) for i, t in enumerate(times)]
    return Hypergraph(2 * len(times), edges)


class TestTemporalSplit:
    def test_threshold_index_on_five_timestamps(self):
        h = _timed_chain([1, 2, 3, 4, 5])
        f_tr, e_tr, e_te = temporal_split(h, 0.2)
        assert sorted(f.time for f in f_tr) == [1, 2, 3, 4]
        assert len(e_tr) == 4 and len(e_te) == 1

    def test_rho_zero_keeps_everything_in_train(self):
        with pytest.raises(ValueError, match="empty test period"):
            temporal_split(_timed_chain([1, 2, 3]), 0.0)

    def test_toy_late_group_adds_no_new_links(self, toy_timed):
        # DE first co-occurs at t=2, so the t=3 group contributes nothing new
        f_tr, e_tr, e_te = temporal_split(toy_timed, 1 / 3)
        assert [f.sorted_vertices() for f in f_tr] == [(A, B, C), (B, C, D, E)]
        assert e_te == ()
        assert len(e_tr) == 8

    def test_untimed_rejected(self, toy_hypergraph):
        with pytest.raises(ValueError, match="timed"):
            temporal_split(toy_hypergraph, 0.2)

    def test_no_train_hyperedge_from_test_period(self):
        h = random_hypergraph(20, 60, seed=9, timed=True)
        f_tr, e_tr, e_te = temporal_split(h, 0.3)
        cut = max(f.time for f in f_tr)
        test_times = {f.time for f in h.hyperedges} - {f.time for f in f_tr}
        assert all(t > cut for t in test_times)

    def test_test_links_absent_from_train_expansion(self):
        h = random_hypergraph(15, 40, seed=4, timed=True)
        f_tr, e_tr, e_te = temporal_split(h, 0.4)
        train_expansion = clique_expand(Hypergraph(h.n_vertices, f_tr)).edges
        assert not (set(e_te) & train_expansion)


class TestStructuralSplit:
    def test_test_size_is_ceil(self, toy_hypergraph):
        f_tr, e_tr, e_te = structural_split(toy_hypergraph, 0.2, seed=7)
        assert len(e_te) == 2  # ceil(0.2 * 8)
        assert len(e_tr) == 6

    def test_rho_zero_rejected(self, toy_hypergraph):
        with pytest.raises(ValueError, match="empty test set"):
            structural_split(toy_hypergraph, 0.0, seed=7)

    def test_rho_one_rejected(self, toy_hypergraph):
        with pytest.raises(ValueError, match="no train edges"):
            structural_split(toy_hypergraph, 1.0, seed=7)

    def test_same_seed_same_split(self, toy_hypergraph):
        first = structural_split(toy_hypergraph, 0.25, seed=123)
        second = structural_split(toy_hypergraph, 0.25, seed=123)
        assert first[2] == second[2]
        assert [f.vertices for f in first[0]] == [f.vertices for f in second[0]]

    def test_no_test_edge_survives_in_train_hyperedges(self):
        for seed in range(10):
            h = random_hypergraph(18, 35, seed=seed)
            f_tr, _, e_te = structural_split(h, 0.2, seed=seed)
            for f in f_tr:
                for e in e_te:
                    assert not set(e) <= f.vertices


class TestCleanHyperedges:
    def test_strips_single_test_edge(self):
        out = clean_hyperedges([Hyperedge(frozenset({A, B, C}))], [(A, B)])
        assert [f.vertices for f in out] == [frozenset({B, C})]

    def test_untouched_hyperedges_pass_through_verbatim(self, toy_hypergraph):
        out = clean_hyperedges(toy_hypergraph.hyperedges, [(A, E)])  # contained nowhere
        assert list(out) == list(toy_hypergraph.hyperedges)

    def test_one_vertex_can_cover_two_test_edges(self):
        out = clean_hyperedges([Hyperedge(frozenset({B, C, D, E}))], [(B, C), (B, D)])
        assert [f.vertices for f in out] == [frozenset({C, D, E})]

    def test_output_is_subset_of_source(self):
        h = random_hypergraph(15, 30, seed=2)
        edges = clique_expand(h).edge_list
        test_edges = edges[::3]
        out = clean_hyperedges(h.hyperedges, test_edges)
        remaining = list(h.hyperedges)
        for f in out:
            src = next(g for g in remaining if f.vertices <= g.vertices)
            remaining.remove(src)

    def test_soundness_brute_force(self):
        for seed in range(8):
            h = random_hypergraph(12, 25, seed=seed, size_range=(2, 5))
            edges = clique_expand(h).edge_list
            test_edges = edges[1::2]
            out = clean_hyperedges(h.hyperedges, test_edges)
            te_set = set(test_edges)
            for f in out:
                for e in itertools.combinations(sorted(f.vertices), 2):
                    assert e not in te_set, f"{e} survived in {f}"

    def test_pair_sized_hyperedge_shrinks_to_singleton(self):
        out = clean_hyperedges([Hyperedge(frozenset({A, B}))], [(A, B)])
        assert [f.vertices for f in out] == [frozenset({B})]


class TestSampleNegatives:
    def test_toy_complement_is_ad_ae(self, toy_hypergraph):
        edges = clique_expand(toy_hypergraph).edges
        with pytest.warns(UserWarning, match="capping"):
            got = sample_negatives(toy_hypergraph, edges, 5, seed=0)
        assert got == ((A, D), (A, E))

    def test_complete_graph_has_no_negatives(self):
        h = Hypergraph(3, [Hyperedge(frozenset({0, 1, 2}))])
        with pytest.raises(ValueError, match="no non-links"):
            sample_negatives(h, clique_expand(h).edges, 1, seed=0)

    def test_single_sample_comes_from_complement(self, toy_hypergraph):
        edges = clique_expand(toy_hypergraph).edges
        got = sample_negatives(toy_hypergraph, edges, 1, seed=5)
        assert len(got) == 1 and got[0] in {(A, D), (A, E)}

    def test_seeded_determinism(self):
        h = random_hypergraph(30, 20, seed=0)
        edges = clique_expand(h).edges
        assert sample_negatives(h, edges, 25, seed=9) == sample_negatives(h, edges, 25, seed=9)

    def test_samples_avoid_known_edges(self):
        h = random_hypergraph(25, 40, seed=1)
        edges = clique_expand(h).edges
        got = sample_negatives(h, edges, 50, seed=3)
        assert len(set(got)) == len(got)
        assert not (set(got) & edges)


class TestPrepare:
    def test_negative_multiplier_on_timed_data(self):
        h = random_hypergraph(40, 60, seed=6, timed=True, size_range=(2, 4))
        prep = prepare(h, SplitSpec("temporal", 0.2, 5, seed=0))
        assert len(prep.test_links) > 0
        assert len(prep.test_nonlinks) == 5 * len(prep.test_links)

    def test_structural_toy_caps_negatives(self, toy_hypergraph):
        with pytest.warns(UserWarning, match="capping"):
            prep = prepare(toy_hypergraph, SplitSpec("structural", 0.2, 5, seed=7))
        assert len(prep.test_links) == 2
        assert len(prep.test_nonlinks) == 2

    def test_rho_zero_propagates_error(self, toy_hypergraph):
        with pytest.raises(ValueError):
            prepare(toy_hypergraph, SplitSpec("structural", 0.0, 5, seed=7))

    def test_deterministic(self):
        h = random_hypergraph(20, 30, seed=8)
        spec = SplitSpec("structural", 0.2, 2, seed=44)
        first, second = prepare(h, spec), prepare(h, spec)
        assert first.train_edges == second.train_edges
        assert first.test_links == second.test_links
        assert first.test_nonlinks == second.test_nonlinks

    def test_invalid_spec_values(self):
        with pytest.raises(ValueError):
            SplitSpec("structural", rho=1.5)
        with pytest.raises(ValueError):
            SplitSpec("structural", p=0)
        with pytest.raises(ValueError):
            SplitSpec("sideways")

    def test_prepared_invariants_enforced(self, toy_hypergraph):
        with pytest.raises(ValueError, match="overlap"):
            PreparedDataset(toy_hypergraph, ((A, B),), ((A, B),), ())
        with pytest.raises(ValueError, match="overlap"):
            PreparedDataset(toy_hypergraph, ((A, B),), ((A, D),), ((A, D),))


class TestPersistence:
    def test_round_trip(self, tmp_path):
        h = random_hypergraph(20, 30, seed=8)
        prep = prepare(h, SplitSpec("structural", 0.2, 2, seed=44))
        save_prepared(prep, tmp_path / "split", extra_meta={"mode": "structural"})
        again, meta = load_prepared(tmp_path / "split")
        assert again.train_edges == prep.train_edges
        assert again.test_links == prep.test_links
        assert again.test_nonlinks == prep.test_nonlinks
        assert [f.vertices for f in again.train_hypergraph.hyperedges] == \
               [f.vertices for f in prep.train_hypergraph.hyperedges]
        assert meta["mode"] == "structural"

    def test_rewrite_is_byte_identical(self, tmp_path):
        h = random_hypergraph(20, 30, seed=8)
        prep = prepare(h, SplitSpec("structural", 0.2, 2, seed=44))
        save_prepared(prep, tmp_path / "one")
        save_prepared(prep, tmp_path / "two")
        for name in ("train_hyperedges.txt", "train_edges.txt", "test_links.txt",
                     "test_nonlinks.txt", "split_meta.json"):
            assert (tmp_path / "one" / name).read_bytes() == (tmp_path / "two" / name).read_bytes()

    def test_missing_directory(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_prepared(tmp_path / "nope")
