"""Tests for the generators and the exhaustive oracles."""

import networkx as nx
import numpy as np
import pytest

from src.decomposition import height
from src.errors import SpecError, TooLargeError
from src.genlab import (
    Target,
    enumerate_posets,
    generate,
    oracle_ell_order,
    oracle_tiny_best,
    parse_spec,
    splitmix64,
    uniforms,
)
from tests.helpers import antichain, boolean_lattice, chain, comparable_pairs, to_digraph


class TestStream:
    def test_first_output_for_seed_zero(self):
        assert int(splitmix64(0, 1)[0]) == 0xE220A8397B1DCDAF

    def test_prefix_stable(self):
        assert np.array_equal(splitmix64(42, 10)[:4], splitmix64(42, 4))

    def test_uniforms_in_unit_interval(self):
        draws = uniforms(7, 1000)
        assert draws.min() >= 0.0
        assert draws.max() < 1.0


class TestGenerate:
    def test_chain_and_antichain(self):
        assert generate({"model": "chain", "n": 5}) == chain(5)
        assert generate({"model": "antichain", "n": 4}) == antichain(4)

    def test_random_dag_is_reproducible(self):
        spec = '{"model": "random-dag", "n": 30, "p": 0.2, "seed": 11}'
        assert generate(spec) == generate(spec)

    def test_random_dag_edges_go_up(self):
        poset = generate({"model": "random-dag", "n": 30, "p": 0.3, "seed": 5})
        assert all(x < y for x, y in comparable_pairs(poset))

    def test_extreme_probabilities(self):
        assert generate({"model": "random-dag", "n": 6, "p": 0, "seed": 1}) == antichain(6)
        assert generate({"model": "random-dag", "n": 6, "p": 1, "seed": 1}) == chain(6)

    def test_layered(self):
        poset = generate({"model": "layered", "widths": [3, 4, 2], "p": 1})
        assert poset.n == 9
        assert height(poset) == 3
        assert poset.less(0, 8)

    def test_grid_is_the_product_order(self):
        grid = generate({"model": "grid", "d1": 2, "d2": 2})
        assert grid == boolean_lattice()
        assert height(grid) == 3

    def test_grid_matches_networkx_product(self):
        grid = generate({"model": "grid", "d1": 3, "d2": 4})
        product = nx.cartesian_product(nx.path_graph(3, nx.DiGraph), nx.path_graph(4, nx.DiGraph))
        relabeled = nx.relabel_nodes(product, {(i, j): i * 4 + j for i, j in product.nodes})
        closure = nx.transitive_closure_dag(relabeled)
        assert comparable_pairs(grid) == set(closure.edges())

    def test_stacked(self):
        spec = {"model": "stacked", "base": {"model": "antichain", "n": 3}, "copies": 2}
        poset = generate(spec)
        assert poset.n == 6
        assert height(poset) == 2
        assert poset.less(0, 5)
        assert not poset.comparable(3, 4)

    def test_stacked_closure_matches_networkx(self):
        spec = {
            "model": "stacked",
            "base": {"model": "random-dag", "n": 8, "p": 0.3, "seed": 2},
            "copies": 3,
        }
        poset = generate(spec)
        closure = nx.transitive_closure_dag(to_digraph(poset))
        assert comparable_pairs(poset) == set(closure.edges())

    @pytest.mark.parametrize(
        "spec",
        [
            {"model": "torus", "n": 3},
            {"model": "chain"},
            {"model": "random-dag", "n": 4},
            {"model": "random-dag", "n": 4, "p": 1.5},
            {"model": "layered", "widths": [2, 0], "p": 0.5},
            {"model": "grid", "d1": 0, "d2": 3},
            {"model": "stacked", "base": {"model": "chain", "n": 2}},
            {"model": "chain", "n": 3, "seed": -1},
            "not json",
        ],
    )
    def test_invalid_specs(self, spec):
        with pytest.raises(SpecError):
            parse_spec(spec)


class TestOracles:
    def test_tiny_best_chain(self):
        assert oracle_tiny_best(chain(6), 3, Target.SET_CHAIN) == 2
        assert oracle_tiny_best(chain(6), 3, "incomparable") == 0

    def test_tiny_best_antichain(self):
        assert oracle_tiny_best(antichain(6), 3, Target.INCOMPARABLE) == 2
        assert oracle_tiny_best(antichain(6), 2, Target.SET_CHAIN) == 0

    def test_tiny_best_lattice(self):
        assert oracle_tiny_best(boolean_lattice(), 2, Target.INCOMPARABLE) == 1
        assert oracle_tiny_best(boolean_lattice(), 2, Target.SET_CHAIN) == 1

    def test_tiny_best_limit(self):
        with pytest.raises(TooLargeError):
            oracle_tiny_best(antichain(13), 2, Target.INCOMPARABLE)

    def test_ell_order_limit(self):
        with pytest.raises(TooLargeError):
            oracle_ell_order(antichain(201), 1)

    def test_enumeration_counts(self):
        assert [len(enumerate_posets(n)) for n in range(5)] == [1, 1, 3, 19, 219]

    @pytest.mark.slow
    def test_enumeration_five(self):
        posets = enumerate_posets(5)
        assert len(posets) == 4231
        assert len(set(posets)) == 4231

    def test_enumeration_limit(self):
        with pytest.raises(TooLargeError):
            enumerate_posets(6)
