"""Circle/arc configurations, the hub predicate, and the graph form."""

import numpy as np
import pytest

from handlepsc.linkconfig import (Arc, BlackGraph, Color, ConfigFormatError,
                                  LinkConfig, black_graph_check, config_to_graph,
                                  connected_sum, format_config,
                                  l8n1_black_graph, l8n1_configuration,
                                  parse_config, theorem_applicable,
                                  torus_two_strand, trefoil_coloring_a,
                                  trefoil_coloring_b, two_crossing_configs)


def brute_force_hub(n_vertices, pairs):
    """Independent witness search: count endpoint hits per candidate."""
    for v in range(n_vertices):
        if all((i == v) + (j == v) == 1 for i, j in pairs):
            return v
    return None


class TestParsing:
    def test_l8n1_fixture_parses(self):
        cfg = parse_config(format_config(l8n1_configuration()))
        assert cfg.n_circles == 6
        assert len(cfg.arcs) == 8

    def test_l8n1_black_graph_counts(self):
        g = l8n1_black_graph()
        assert g.n_vertices == 5
        assert len(g.edges) == 8

    def test_out_of_range_label_rejected(self):
        text = "circles 3\narc 0 9 0\n"
        with pytest.raises(ConfigFormatError):
            parse_config(text)

    def test_malformed_color_rejected(self):
        with pytest.raises(ConfigFormatError):
            parse_config("circles 2\narc 0 1 red\n")

    def test_missing_header_rejected(self):
        with pytest.raises(ConfigFormatError):
            parse_config("arc 0 1 0\n")

    def test_comments_and_blanks(self):
        cfg = parse_config("# two circles\ncircles 2\n\narc 0 1 1 # clasp\n")
        assert cfg.arcs == (Arc(0, 1, Color.ONE_RES),)

    def test_empty_arc_list_is_vacuously_applicable(self):
        cfg = parse_config("circles 3\n")
        verdict = theorem_applicable(cfg)
        assert verdict.applicable
        assert verdict.witness == 0

    def test_round_trip(self):
        cfg = trefoil_coloring_b()
        assert parse_config(format_config(cfg)) == cfg


class TestWorkedExamples:
    def test_trefoil_coloring_a_applies(self):
        verdict = theorem_applicable(trefoil_coloring_a())
        assert verdict.applicable
        assert verdict.witness in (0, 1)

    def test_trefoil_coloring_b_does_not(self):
        verdict = theorem_applicable(trefoil_coloring_b())
        assert not verdict.applicable
        assert verdict.witness is None
        assert set(verdict.counterexamples) == {0, 1, 2}

    def test_all_two_crossing_configurations_apply(self):
        for name, cfg in two_crossing_configs().items():
            assert theorem_applicable(cfg).applicable, name

    @pytest.mark.parametrize("n", [3, 4])
    def test_two_strand_torus_diagrams_apply(self, n):
        assert theorem_applicable(torus_two_strand(n)).applicable

    def test_connected_sum_keeps_the_outer_hub(self):
        verdict = theorem_applicable(connected_sum([4, 3]))
        assert verdict.applicable
        assert verdict.witness == 0


class TestGraphForm:
    def test_star_multigraph_applies(self):
        g = BlackGraph(4, ((0, 1), (0, 1), (0, 2), (0, 3), (0, 3)))
        verdict = black_graph_check(g)
        assert verdict.applicable
        assert verdict.witness == 0

    def test_triangle_does_not(self):
        assert not black_graph_check(BlackGraph(3, ((0, 1), (1, 2), (2, 0)))).applicable

    def test_loop_disqualifies_its_vertex(self):
        assert not black_graph_check(BlackGraph(1, ((0, 0),))).applicable

    def test_config_and_graph_forms_agree(self):
        for cfg in (trefoil_coloring_a(), trefoil_coloring_b(),
                    connected_sum([4, 3]), l8n1_configuration()):
            assert (theorem_applicable(cfg).applicable
                    == black_graph_check(config_to_graph(cfg)).applicable)


class TestInvariance:
    def test_relabeling_preserves_verdict(self):
        rng = np.random.default_rng(42)
        for cfg in (trefoil_coloring_a(), trefoil_coloring_b(),
                    connected_sum([3, 4]), l8n1_configuration()):
            want = theorem_applicable(cfg).applicable
            for _ in range(10):
                perm = list(rng.permutation(cfg.n_circles))
                assert theorem_applicable(cfg.relabeled(perm)).applicable == want

    def test_arc_order_and_colors_never_matter(self):
        rng = np.random.default_rng(42)
        for cfg in (trefoil_coloring_a(), connected_sum([3, 4]),
                    l8n1_configuration()):
            want = theorem_applicable(cfg).applicable
            assert theorem_applicable(cfg.color_flipped()).applicable == want
            order = list(rng.permutation(len(cfg.arcs)))
            shuffled = LinkConfig(cfg.n_circles,
                                  tuple(cfg.arcs[k] for k in order))
            assert theorem_applicable(shuffled).applicable == want


class TestRandomCorpus:
    def test_thousand_graphs_match_brute_force(self):
        rng = np.random.default_rng(42)
        for _ in range(1000):
            n = int(rng.integers(1, 7))
            m = int(rng.integers(0, 9))
            pairs = [(int(rng.integers(0, n)), int(rng.integers(0, n)))
                     for _ in range(m)]
            colors = [int(rng.integers(0, 2)) for _ in range(m)]
            cfg = LinkConfig(n, tuple(Arc(i, j, Color(c))
                                      for (i, j), c in zip(pairs, colors)))
            expected = brute_force_hub(n, pairs)
            verdict = theorem_applicable(cfg)
            graph_verdict = black_graph_check(config_to_graph(cfg))
            assert verdict.applicable == (expected is not None)
            assert graph_verdict.applicable == verdict.applicable
            if verdict.applicable:
                assert verdict.witness == expected


class TestVerdictShape:
    def test_json_dict(self):
        verdict = theorem_applicable(trefoil_coloring_b())
        d = verdict.to_json_dict()
        assert d["applicable"] is False
        assert d["witness"] is None
        assert set(d["counterexamples"]) == {"0", "1", "2"}
