"""Shared fixtures."""

import json

import pytest

from tests.helpers import antichain, boolean_lattice, chain


@pytest.fixture
def chain5():
    return chain(5)


@pytest.fixture
def antichain16():
    return antichain(16)


@pytest.fixture
def lattice():
    return boolean_lattice()


@pytest.fixture
def poset_file(tmp_path):
    """Write a JSON poset file and return its path."""

    def write(n, relations, name="poset.json"):
        path = tmp_path / name
        path.write_text(json.dumps({"n": n, "relations": [list(pair) for pair in relations]}))
        return str(path)

    return write
