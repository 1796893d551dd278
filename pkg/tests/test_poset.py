"""Tests for the poset core."""

import numpy as np
import networkx as nx
import pytest
from hypothesis import given, settings

from src.errors import CycleError, OverlapError, RangeError, UsageError
from src.genlab import generate
from src.poset import (
    Claim,
    Neighborhood,
    Poset,
    SubsetFamily,
    build_poset,
    count_between,
    covers,
    dual,
    induced,
    linear_extension,
    neighborhood,
    to_dot,
    verify_structure,
)
from tests.helpers import antichain, chain, comparable_pairs, posets, to_digraph


class TestBuildPoset:
    def test_transitivity_is_forced(self):
        poset = build_poset(3, [(0, 1), (1, 2)])
        assert poset.less(0, 2)
        assert not poset.less(2, 0)

    def test_empty_relations_give_antichain(self):
        poset = build_poset(4, [])
        assert comparable_pairs(poset) == set()

    def test_two_cycle_rejected(self):
        with pytest.raises(CycleError):
            build_poset(2, [(0, 1), (1, 0)])

    def test_self_pair_rejected(self):
        with pytest.raises(CycleError):
            build_poset(3, [(1, 1)])

    def test_long_cycle_rejected(self):
        with pytest.raises(CycleError):
            build_poset(4, [(0, 1), (1, 2), (2, 3), (3, 0)])

    @pytest.mark.parametrize("relations", [[(0, 3)], [(-1, 0)], [(2, 5)]])
    def test_out_of_range_ids(self, relations):
        with pytest.raises(RangeError):
            build_poset(3, relations)

    def test_negative_count(self):
        with pytest.raises(RangeError):
            build_poset(-1, [])

    def test_empty_poset(self):
        poset = build_poset(0, [])
        assert poset.n == 0
        assert linear_extension(poset) == ()
        assert covers(poset) == ()

    def test_matrices_are_read_only(self, chain5):
        with pytest.raises(ValueError):
            chain5.up_matrix[0, 0] = True

    @pytest.mark.parametrize("seed", range(5))
    def test_closure_matches_networkx(self, seed):
        poset = generate({"model": "random-dag", "n": 40, "p": 0.08, "seed": seed})
        reference = nx.transitive_closure_dag(to_digraph(poset))
        assert comparable_pairs(poset) == set(reference.edges())

    @pytest.mark.property_based
    @given(posets(max_n=14))
    @settings(max_examples=60, deadline=None)
    def test_order_axioms(self, poset):
        up = poset.up_matrix
        assert not np.diagonal(up).any()
        assert not (up & up.T).any()
        composed = (up.astype(int) @ up.astype(int)) > 0
        assert not (composed & ~up).any()


class TestNeighborhood:
    def test_down_element(self):
        assert neighborhood(chain(3), Neighborhood.DOWN_ELEMENT, 2) == (0, 1)

    def test_up_element_accepts_string_mode(self):
        assert neighborhood(chain(3), "up-element", 0) == (1, 2)

    def test_down_set_of_antichain_is_empty(self):
        assert neighborhood(antichain(5), Neighborhood.DOWN_SET, {0, 1}) == ()

    def test_down_set_excludes_members(self):
        assert neighborhood(chain(4), Neighborhood.DOWN_SET, {2, 3}) == (0, 1)

    def test_range_error(self, chain5):
        with pytest.raises(RangeError):
            neighborhood(chain5, Neighborhood.DOWN_ELEMENT, 5)

    def test_unknown_mode(self, chain5):
        with pytest.raises(UsageError):
            neighborhood(chain5, "sideways", 0)

    @pytest.mark.property_based
    @given(posets(min_n=1, max_n=12))
    @settings(max_examples=50, deadline=None)
    def test_every_element_is_counted_once(self, poset):
        for x in range(poset.n):
            total = len(poset.down(x)) + len(poset.up(x)) + len(poset.incomparable_to(x)) + 1
            assert total == poset.n

    @pytest.mark.property_based
    @given(posets(min_n=1, max_n=12))
    @settings(max_examples=50, deadline=None)
    def test_down_set_disjoint_from_argument(self, poset):
        members = set(range(0, poset.n, 2))
        assert not set(neighborhood(poset, Neighborhood.DOWN_SET, members)) & members


class TestInducedAndDual:
    def test_induced_chain(self, chain5):
        sub, id_map = induced(chain5, {0, 2, 4})
        assert sub == chain(3)
        assert id_map == {0: 0, 2: 1, 4: 2}

    def test_induced_empty(self, chain5):
        sub, id_map = induced(chain5, set())
        assert sub.n == 0
        assert id_map == {}

    def test_induced_grid_middle_is_antichain(self):
        grid = generate({"model": "grid", "d1": 2, "d2": 2})
        sub, _ = induced(grid, {1, 2})
        assert sub == antichain(2)

    def test_induced_range_error(self, chain5):
        with pytest.raises(RangeError):
            induced(chain5, {7})

    @pytest.mark.property_based
    @given(posets(max_n=12))
    @settings(max_examples=40, deadline=None)
    def test_induced_agrees_with_parent(self, poset):
        members = [x for x in range(poset.n) if x % 3 != 1]
        sub, id_map = induced(poset, members)
        for x in members:
            for y in members:
                assert sub.less(id_map[x], id_map[y]) == poset.less(x, y)

    def test_dual_of_chain(self):
        flipped = dual(chain(3))
        assert flipped.less(2, 1) and flipped.less(1, 0) and flipped.less(2, 0)
        assert not flipped.less(0, 1)

    def test_dual_of_antichain(self):
        assert dual(antichain(4)) == antichain(4)

    def test_dual_is_an_involution(self):
        poset = generate({"model": "random-dag", "n": 50, "p": 0.1, "seed": 3})
        assert dual(dual(poset)) == poset
        assert hash(dual(dual(poset))) == hash(poset)


class TestLinearExtension:
    def test_chain(self):
        assert linear_extension(chain(3)) == (0, 1, 2)

    def test_antichain_breaks_ties_by_id(self):
        assert linear_extension(antichain(3)) == (0, 1, 2)

    def test_reversed_pair(self):
        assert linear_extension(build_poset(2, [(1, 0)])) == (1, 0)

    @pytest.mark.property_based
    @given(posets(max_n=14))
    @settings(max_examples=60, deadline=None)
    def test_respects_order(self, poset):
        order = linear_extension(poset)
        assert sorted(order) == list(range(poset.n))
        position = {x: i for i, x in enumerate(order)}
        for x, y in comparable_pairs(poset):
            assert position[x] < position[y]


class TestVerifyStructure:
    def test_ascending_chain(self):
        family = SubsetFamily(((0, 1), (2, 3), (4, 5)), 6)
        assert verify_structure(chain(6), family, Claim.ASCENDING_CHAIN).ok

    def test_descending_chain(self):
        family = SubsetFamily(((4, 5), (2, 3), (0, 1)), 6)
        assert verify_structure(chain(6), family, "descending-chain")

    def test_incomparable_singletons(self):
        family = SubsetFamily(((0,), (1,), (2,)), 4)
        assert verify_structure(antichain(4), family, Claim.TOTALLY_INCOMPARABLE)

    def test_counterexample_reported(self):
        family = SubsetFamily(((0,), (1,)), 2)
        verdict = verify_structure(chain(2), family, Claim.TOTALLY_INCOMPARABLE)
        assert not verdict
        assert verdict.counterexample == (0, 1)

    def test_overlap_rejected(self):
        family = SubsetFamily(((0, 1), (1, 2)), 3)
        with pytest.raises(OverlapError):
            verify_structure(chain(3), family, Claim.ASCENDING_CHAIN)

    def test_family_ids_checked(self):
        with pytest.raises(RangeError):
            SubsetFamily(((0, 3),), 3)

    def test_family_members_sorted(self):
        family = SubsetFamily(((3, 1, 1), ()), 4)
        assert family.sets == ((1, 3), ())
        assert family.sizes == (2, 0)
        assert family.min_size == 0


class TestCoversAndDot:
    def test_chain_covers(self):
        assert covers(chain(3)) == ((0, 1), (1, 2))

    @pytest.mark.parametrize("seed", range(3))
    def test_covers_match_transitive_reduction(self, seed):
        poset = generate({"model": "random-dag", "n": 30, "p": 0.15, "seed": seed})
        reduction = nx.transitive_reduction(to_digraph(poset))
        assert set(covers(poset)) == set(reduction.edges())

    def test_dot_of_chain(self):
        text = to_dot(chain(3))
        assert text.startswith("digraph P {")
        assert text.count("->") == 2
        assert sum(1 for line in text.splitlines() if line.strip().endswith(";") and "->" not in line) == 3

    def test_between_counts_on_chain(self, chain5):
        counts = count_between(chain5.up_matrix)
        assert counts[0, 4] == 3
        assert counts[4, 0] == 0


def test_poset_requires_square_matrix():
    with pytest.raises(ValueError):
        Poset(np.zeros((2, 3), dtype=bool))
