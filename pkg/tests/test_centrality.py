"""
Quasi-centrality and the classical measures it is compared with.

Covers:
  - quasi-centrality on the star network (worked values, ranking)
  - nonnegativity on random flow networks
  - Katz / PageRank against networkx, HITS against the closed form
  - the comparison table

Run:  pytest tests/test_centrality.py -v
"""
import math

import networkx as nx
import numpy as np
import pytest

from dowkernet.centrality import (
    Measure,
    compare,
    degree_centrality,
    hits,
    katz,
    pagerank,
    quasi_centrality,
    reports_to_wide_csv,
)
from dowkernet.errors import ConvergenceError, DomainError
from dowkernet.network import DirectedNetwork, effective_distance
from tests.conftest import random_flow


def _digraph(g: DirectedNetwork) -> nx.DiGraph:
    G = nx.DiGraph()
    G.add_nodes_from(g.nodes)
    for i, source in enumerate(g.nodes):
        for j, target in enumerate(g.nodes):
            if g.weights[i, j] > 0:
                G.add_edge(source, target, weight=float(g.weights[i, j]))
    return G


# ---------------------------------------------------------------------------
# Quasi-centrality on the star network
# ---------------------------------------------------------------------------

class TestQuasiFigure1:
    def test_hub(self, figure1, figure1_gamma):
        g = figure1_gamma
        finite = [g.weight("x3", t) for t in ("x1", "x2", "x5", "x6")]
        expected = (1.0 + 4 * g.sentinel) - (1.0 + math.fsum(finite) + g.sentinel) + g.weight("x3", "x6")
        score = quasi_centrality(figure1).scores["x3"]
        assert score == pytest.approx(expected, abs=1e-9)
        # the worked example's own expression evaluates to 62.578; its printed 65.978 is an arithmetic slip
        assert score == pytest.approx(62.578, abs=1e-3)
        assert score != pytest.approx(65.978, abs=1.0)

    def test_x6(self, figure1):
        score = quasi_centrality(figure1).scores["x6"]
        assert round(score, 2) == 0.29
        assert score == pytest.approx(0.287682, abs=1e-4)

    def test_leaves_are_exactly_zero(self, figure1):
        scores = quasi_centrality(figure1).scores
        for x in ("x1", "x2", "x4", "x5"):
            assert scores[x] == 0.0

    def test_ranking(self, figure1):
        assert quasi_centrality(figure1).ranking() == ["x3", "x6", "x1", "x2", "x5", "x4"]

    def test_dissimilarity_input_used_as_given(self, figure1, figure1_gamma):
        assert quasi_centrality(figure1_gamma).scores == quasi_centrality(figure1).scores

    def test_params_recorded(self, figure1):
        params = quasi_centrality(figure1, epsilon=1e-8).params
        assert params["epsilon"] == 1e-8
        assert params["sentinel"] == pytest.approx(1.0 - math.log(1e-8))
        assert params["input_kind"] == "flow"

    def test_single_node(self):
        with pytest.raises(DomainError):
            quasi_centrality(DirectedNetwork(("a",), np.zeros((1, 1))))

    def test_csv(self, figure1):
        lines = quasi_centrality(figure1).to_csv(["# epsilon=1e-10"]).splitlines()
        assert lines[:3] == ["# epsilon=1e-10", "node,score", "x3,62.577"]


# ---------------------------------------------------------------------------
# Properties on random networks
# ---------------------------------------------------------------------------

class TestQuasiProperties:
    def test_nonnegative(self):
        rng = np.random.default_rng(7)
        for _ in range(500):
            g = random_flow(rng, int(rng.integers(3, 13)), density=float(rng.uniform(0.1, 0.6)))
            scores = quasi_centrality(g).scores
            assert min(scores.values()) >= -1e-9, scores

    def test_isolated_node_scores_zero(self, rng):
        g = random_flow(rng, 6)
        w = np.zeros((7, 7))
        w[:6, :6] = g.weights
        padded = DirectedNetwork(g.nodes + ("lone",), w)
        assert quasi_centrality(padded).scores["lone"] == 0.0

    def test_flow_scale_invariant(self, rng):
        for _ in range(10):
            g = random_flow(rng, 7)
            scaled = DirectedNetwork(g.nodes, g.weights * 4.0)
            assert quasi_centrality(scaled).scores == quasi_centrality(g).scores

    def test_thread_count_irrelevant(self, rng):
        g = random_flow(rng, 10)
        assert quasi_centrality(g, threads=1).scores == quasi_centrality(g, threads=6).scores

    def test_infinite_cap_still_cancels(self, figure1):
        scores = quasi_centrality(figure1, cap=math.inf).scores
        assert scores["x1"] == 0.0


# ---------------------------------------------------------------------------
# Classical measures
# ---------------------------------------------------------------------------

class TestDegree:
    def test_figure1(self, figure1):
        in_degree, out_degree = degree_centrality(figure1)
        assert in_degree.scores["x6"] == 2
        assert in_degree.scores["x3"] == 0
        assert out_degree.scores["x3"] == 5
        assert in_degree.measure is Measure.IN_DEGREE

    def test_same_on_effective_distances(self, figure1, figure1_gamma):
        assert degree_centrality(figure1)[0].scores == degree_centrality(figure1_gamma)[0].scores


class TestKatz:
    def test_matches_networkx(self, rng):
        for _ in range(20):
            g = random_flow(rng, int(rng.integers(3, 9)), density=0.3)
            ours = katz(g).scores
            theirs = nx.katz_centrality_numpy(_digraph(g), alpha=0.1, beta=1.0, weight=None)
            for label in g.nodes:
                assert ours[label] == pytest.approx(theirs[label], abs=1e-10)

    def test_unit_l2_norm(self, figure1):
        scores = np.array(list(katz(figure1).scores.values()))
        assert np.linalg.norm(scores) == pytest.approx(1.0)

    def test_alpha_too_large(self):
        w = np.ones((12, 12)) - np.eye(12)
        with pytest.raises(ConvergenceError) as info:
            katz(DirectedNetwork(tuple(f"n{i}" for i in range(12)), w))
        assert info.value.exit_code == 4

    def test_weighted_mode_recorded(self, figure1):
        assert katz(figure1, binary=False).params["binary"] is False

    def test_two_nodes_closed_form(self):
        scores = katz(DirectedNetwork(("a", "b"), np.array([[0.0, 1.0], [0.0, 0.0]]))).scores
        # x_a = 1, x_b = 1.1 before normalization
        assert scores["a"] == pytest.approx(1.0 / math.hypot(1.0, 1.1))
        assert scores["b"] == pytest.approx(1.1 / math.hypot(1.0, 1.1))

    def test_edgeless(self):
        scores = katz(DirectedNetwork(("a", "b", "c", "d"), np.zeros((4, 4)))).scores
        assert all(v == pytest.approx(0.5) for v in scores.values())


class TestPageRank:
    def test_matches_networkx(self, rng):
        for _ in range(20):
            g = random_flow(rng, int(rng.integers(3, 10)))
            ours = pagerank(g).scores
            theirs = nx.pagerank(_digraph(g), alpha=0.85, weight="weight", tol=1e-14, max_iter=10_000)
            for label in g.nodes:
                assert ours[label] == pytest.approx(theirs[label], abs=1e-9)

    def test_sums_to_one(self, figure1):
        assert math.fsum(pagerank(figure1).scores.values()) == pytest.approx(1.0)

    def test_two_cycle_and_edgeless(self):
        cycle = pagerank(DirectedNetwork(("a", "b"), np.array([[0.0, 3.0], [3.0, 0.0]]))).scores
        assert cycle == pytest.approx({"a": 0.5, "b": 0.5})
        edgeless = pagerank(DirectedNetwork(("a", "b", "c"), np.zeros((3, 3)))).scores
        assert all(v == pytest.approx(1 / 3) for v in edgeless.values())

    def test_hub_receiving_from_leaves_ranks_first(self):
        w = np.zeros((4, 4))
        w[1:, 0] = 1.0
        assert pagerank(DirectedNetwork(("h", "a", "b", "c"), w)).ranking()[0] == "h"

    def test_reversed_is_transpose(self, rng):
        for _ in range(10):
            g = random_flow(rng, 8)
            assert pagerank(g, reversed=True).scores == pagerank(g.transpose()).scores

    def test_alpha_range(self, figure1):
        with pytest.raises(DomainError):
            pagerank(figure1, alpha=1.0)

    def test_convergence_failure(self, figure1):
        with pytest.raises(ConvergenceError):
            pagerank(figure1, max_iter=1, tol=1e-300)


class TestHits:
    def test_closed_form_on_figure1(self, figure1):
        hubs, authorities = hits(figure1)
        # only x3 and x4 send: W W^T restricted to them is [[31, 24], [24, 36]]
        top = (67.0 + math.sqrt(67.0 ** 2 - 4 * (31 * 36 - 24 * 24))) / 2.0
        assert hubs.scores["x4"] / hubs.scores["x3"] == pytest.approx((top - 31.0) / 24.0, rel=1e-9)
        assert hubs.scores["x1"] == 0.0
        assert authorities.scores["x3"] == 0.0
        assert authorities.ranking()[0] == "x6"

    def test_norms(self, figure1):
        hubs, authorities = hits(figure1)
        assert np.linalg.norm(list(hubs.scores.values())) == pytest.approx(1.0)
        l1_hubs, l1_auths = hits(figure1, normalization="l1")
        assert math.fsum(l1_hubs.scores.values()) == pytest.approx(1.0)
        assert math.fsum(l1_auths.scores.values()) == pytest.approx(1.0)

    def test_out_star(self):
        w = np.zeros((4, 4))
        w[0, 1:] = 1.0
        hubs, authorities = hits(DirectedNetwork(("h", "a", "b", "c"), w))
        assert hubs.scores["h"] == pytest.approx(1.0)
        for leaf in ("a", "b", "c"):
            assert authorities.scores[leaf] == pytest.approx(1 / math.sqrt(3))
            assert hubs.scores[leaf] == 0.0

    def test_no_edges(self):
        with pytest.raises(DomainError):
            hits(DirectedNetwork(("a", "b"), np.zeros((2, 2))))

    def test_bad_normalization(self, figure1):
        with pytest.raises(DomainError):
            hits(figure1, normalization="max")


# ---------------------------------------------------------------------------
# Comparison table
# ---------------------------------------------------------------------------

class TestCompare:
    def test_hub_is_invisible_to_classical_measures(self, figure1):
        reports = {r.measure: r for r in compare(figure1)}
        quasi = reports[Measure.QUASI]
        assert quasi.ranking()[:2] == ["x3", "x6"]
        assert all(quasi.scores[x] == 0.0 for x in ("x1", "x2", "x4", "x5"))
        for measure in (Measure.KATZ, Measure.PAGERANK, Measure.HITS_HUB, Measure.HITS_AUTHORITY):
            assert reports[measure].ranking()[0] != "x3", measure

    def test_wide_csv(self, figure1):
        reports = compare(figure1)
        assert [r.measure for r in reports] == list(Measure)
        lines = reports_to_wide_csv(reports, ["# epsilon=1e-10"]).splitlines()
        assert lines[1].split(",") == ["node"] + [m.value for m in Measure]
        assert len(lines) == 2 + figure1.n
        assert all(len(line.split(",")) == 9 for line in lines[1:])

    def test_effective_distance_input(self, figure1):
        gamma = effective_distance(figure1)
        ours = {r.measure: r.scores for r in compare(gamma)}
        theirs = {r.measure: r.scores for r in compare(figure1)}
        assert ours[Measure.QUASI] == theirs[Measure.QUASI]
        for label, score in theirs[Measure.PAGERANK].items():
            assert ours[Measure.PAGERANK][label] == pytest.approx(score, abs=1e-9)
