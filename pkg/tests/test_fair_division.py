"""Tests for exact cake cutting and block selection."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.errors import PartitionError, PreconditionError, RangeError
from src.fair_division import PLMeasure, cake_cut, discrete_blocks, partition_select


def pairs(count):
    return [(2 * i, 2 * i + 1) for i in range(count)]


@st.composite
def selection_instances(draw):
    """k blocks of size a and k' < k disjoint sets of size b >= a scattered over them."""
    a = draw(st.integers(1, 4))
    k = draw(st.integers(2, 16))
    k_prime = draw(st.integers(1, k - 1))
    b = draw(st.integers(a, k * a // k_prime))
    order = draw(st.permutations(range(k * a)))
    blocks = [tuple(range(a * i, a * (i + 1))) for i in range(k)]
    b_sets = [tuple(sorted(order[b * j : b * (j + 1)])) for j in range(k_prime)]
    return blocks, b_sets


class TestPLMeasure:
    def test_from_masses(self):
        measure = PLMeasure.from_masses([1, 0, 3])
        assert measure.values == (0, 1, 1, 4)
        assert measure.k == 3
        assert measure.total == 4

    def test_interpolation(self):
        measure = PLMeasure.from_masses([2, 2])
        assert measure.cdf(Fraction(1, 2)) == 1
        assert measure.measure(Fraction(1, 2), 2) == 3

    def test_cdf_is_clamped(self):
        measure = PLMeasure.from_masses([1, 1])
        assert measure.cdf(-1) == 0
        assert measure.cdf(5) == 2

    @pytest.mark.parametrize("values", [(), (1, 2), (0, 2, 1)])
    def test_invalid_values(self, values):
        with pytest.raises(ValueError):
            PLMeasure(values)

    def test_last_point_skips_flat_pieces(self):
        measure = PLMeasure.from_masses([2, 0, 2])
        assert measure.last_point_at_most(Fraction(2), 3) == 2
        assert measure.last_point_at_most(Fraction(1), 3) == Fraction(1, 2)


class TestCakeCut:
    def test_two_uniform_measures(self):
        measure = PLMeasure((0, 1, 2))
        cut = cake_cut([measure, measure])
        assert cut.cuts == (0, 1, 2)
        assert cut.pi == (1, 0)

    def test_single_measure_takes_everything(self):
        cut = cake_cut([PLMeasure.from_masses([1, 2, 3])])
        assert cut.cuts == (0, 3)
        assert cut.pi == (0,)

    def test_zero_measure_gets_an_empty_interval(self):
        cut = cake_cut([PLMeasure.from_masses([0, 0]), PLMeasure.from_masses([1, 1])])
        assert cut.pi == (0, 1)
        assert cut.interval(0) == (0, 0)
        assert cut.interval(1) == (0, 2)

    def test_all_zero_measures_cut_uniformly(self):
        zero = PLMeasure.from_masses([0, 0, 0])
        cut = cake_cut([zero, zero, zero])
        assert cut.cuts == (0, 1, 2, 3)

    def test_errors(self):
        with pytest.raises(RangeError):
            cake_cut([])
        with pytest.raises(RangeError):
            cake_cut([PLMeasure.from_masses([1]), PLMeasure.from_masses([1, 1])])

    @pytest.mark.property_based
    @given(
        st.integers(1, 6).flatmap(
            lambda k: st.lists(st.lists(st.integers(0, 9), min_size=k, max_size=k), min_size=1, max_size=5)
        )
    )
    @settings(max_examples=100, deadline=None)
    def test_every_owner_gets_its_share(self, mass_lists):
        measures = [PLMeasure.from_masses(masses) for masses in mass_lists]
        cut = cake_cut(measures)
        s = len(measures)
        assert sorted(cut.pi) == list(range(s))
        assert cut.cuts[0] == 0 and cut.cuts[-1] == measures[0].k
        assert list(cut.cuts) == sorted(cut.cuts)
        for i, j in enumerate(cut.pi):
            assert measures[j].measure(*cut.interval(i)) * s >= measures[j].total


class TestDiscreteBlocks:
    def test_two_halves(self):
        assignment = discrete_blocks(pairs(4), [tuple(range(4)), tuple(range(4, 8))])
        assert assignment.cuts == (0, 3, 4)
        assert assignment.pi == (0, 1)
        assert assignment.intersections == (4, 2)

    def test_overlapping_blocks(self):
        with pytest.raises(PartitionError):
            discrete_blocks([(0, 1), (1, 2)], [(0,)])

    def test_uncovered_ground(self):
        with pytest.raises(PartitionError):
            discrete_blocks(pairs(2), [(0,)], ground=tuple(range(5)))

    def test_b_outside_blocks(self):
        with pytest.raises(PartitionError):
            discrete_blocks(pairs(2), [(0, 9)])

    @pytest.mark.slow
    @pytest.mark.property_based
    @given(st.integers(2, 8), st.integers(1, 4), st.data())
    @settings(max_examples=500, deadline=None)
    def test_bound_holds(self, k, s, data):
        blocks = [tuple(range(3 * i, 3 * i + 3)) for i in range(k)]
        ground = list(range(3 * k))
        b_sets = [
            tuple(data.draw(st.lists(st.sampled_from(ground), unique=True, max_size=3 * k)))
            for _ in range(s)
        ]
        assignment = discrete_blocks(blocks, b_sets, ground=tuple(ground))
        for i, j in enumerate(assignment.pi):
            assert assignment.intersections[i] >= -(-len(b_sets[j]) // s) - 3


class TestPartitionSelect:
    def test_three_sets(self):
        selection = partition_select(pairs(6), [tuple(range(4 * j, 4 * j + 4)) for j in range(3)])
        assert selection.pairs == ((0, 2), (1, 4), (2, 6))
        assert selection.pieces == ((0, 1, 2, 3), (4, 5, 6, 7), (8, 9, 10, 11))
        assert selection.bound == Fraction(4, 3)

    def test_interleaved_sets(self):
        # B_j holds the j-th element of every pair of blocks
        blocks = pairs(8)
        b_sets = [tuple(range(0, 16, 2)), tuple(range(1, 16, 2))]
        selection = partition_select(blocks, b_sets)
        assert selection.pairs == ((0, 4),)
        assert selection.pieces == ((0, 2, 4, 6),)
        for piece in selection.pieces:
            assert len(piece) >= selection.bound
        for loss in selection.losses:
            assert loss <= 8 + 2 + 8

    def test_shape_violations(self):
        with pytest.raises(PreconditionError) as excinfo:
            partition_select(pairs(2), [(0, 1), (2, 3), (4, 5)])
        assert excinfo.value.violations[0].startswith("k > k' ≥ 1")

    def test_b_smaller_than_a(self):
        with pytest.raises(PreconditionError) as excinfo:
            partition_select([(0, 1, 2), (3, 4, 5)], [(0, 1)])
        assert excinfo.value.violations == ["b ≥ a (a=3, b=2)"]

    def test_overlapping_b_sets(self):
        with pytest.raises(PreconditionError) as excinfo:
            partition_select(pairs(4), [(0, 1), (1, 2)])
        assert "B sets disjoint" in excinfo.value.violations

    @pytest.mark.slow
    @pytest.mark.property_based
    @given(selection_instances())
    @settings(max_examples=500, deadline=None)
    def test_random_selection_keeps_its_bounds(self, instance):
        blocks, b_sets = instance
        k_prime, b = len(b_sets), len(b_sets[0])
        selection = partition_select(blocks, b_sets)
        assert len(selection) >= k_prime // 3

        labels = [t for t, _ in selection.pairs]
        assert len(set(labels)) == len(labels)
        ends = [h for _, h in selection.pairs]
        assert all(before < after for before, after in zip([0] + ends, ends))

        previous = 0
        for (t, h), piece in zip(selection.pairs, selection.pieces):
            inside = {x for block in blocks[previous:h] for x in block}
            assert set(piece) == set(b_sets[t]) & inside
            assert len(piece) * k_prime >= b
            previous = h
        assert all(loss <= 3 * b for loss in selection.losses)


@pytest.mark.slow
@pytest.mark.parametrize("batch", range(10))
def test_cake_cut_on_random_rationals(batch):
    rng = np.random.default_rng(batch)
    for _ in range(100):
        k, s = int(rng.integers(1, 65)), int(rng.integers(1, 9))
        measures = [
            PLMeasure.from_masses(
                [Fraction(int(rng.integers(0, 10)), int(rng.integers(1, 7))) for _ in range(k)]
            )
            for _ in range(s)
        ]
        cut = cake_cut(measures)
        assert sorted(cut.pi) == list(range(s))
        for i, j in enumerate(cut.pi):
            assert measures[j].measure(*cut.interval(i)) * s >= measures[j].total
