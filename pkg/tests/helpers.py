"""Shared builders, strategies and oracles for the test suite."""

import itertools

import networkx as nx
import numpy as np
from hypothesis import strategies as st

from src.poset import Poset, build_poset


def chain(n: int) -> Poset:
    return build_poset(n, [(i, i + 1) for i in range(n - 1)])


def antichain(n: int) -> Poset:
    return build_poset(n, [])


def boolean_lattice() -> Poset:
    """Subsets of {a, b}: 0 = {}, 1 = {a}, 2 = {b}, 3 = {a, b}."""
    return build_poset(4, [(0, 1), (0, 2), (1, 3), (2, 3)])


def comparable_pairs(poset: Poset) -> set[tuple[int, int]]:
    return {(int(x), int(y)) for x, y in np.argwhere(poset.up_matrix)}


def to_digraph(poset: Poset) -> nx.DiGraph:
    graph = nx.DiGraph()
    graph.add_nodes_from(range(poset.n))
    graph.add_edges_from(comparable_pairs(poset))
    return graph


def bipartite_bounded(bottom: int, top: int, degree: int, seed: int) -> Poset:
    """Two layers; every top element lies above at most `degree` bottom elements."""
    rng = np.random.default_rng(seed)
    relations = []
    for y in range(bottom, bottom + top):
        count = int(rng.integers(0, degree + 1))
        for x in rng.choice(bottom, size=count, replace=False):
            relations.append((int(x), y))
    return build_poset(bottom + top, relations)


def longest_monotone_brute(values) -> int:
    best = 0
    for size in range(len(values), 0, -1):
        for picked in itertools.combinations(values, size):
            pairs = list(zip(picked, picked[1:]))
            if all(a < b for a, b in pairs) or all(a > b for a, b in pairs):
                return size
    return best


@st.composite
def posets(draw, min_n: int = 0, max_n: int = 12):
    """Random posets: relations only go from smaller to larger ids, so no cycles."""
    n = draw(st.integers(min_n, max_n))
    if n < 2:
        return build_poset(n, [])
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), max_size=2 * n, unique=True))
    return build_poset(n, chosen)
