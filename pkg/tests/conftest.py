import pytest

from hyperlp import Hyperedge, Hypergraph

# Toy co-authorship hypergraph used throughout: authors A..E = 0..4 with
# collaboration groups ABC, BCDE, DE.  Its expansion has 8 edges; the two
# missing pairs are AD and AE.
A, B, C, D, E = range(5)
TOY_GROUPS = [{A, B, C}, {B, C, D, E}, {D, E}]


@pytest.fixture
def toy_hypergraph() -> Hypergraph:
    return Hypergraph(5, [Hyperedge(frozenset(g)) for g in TOY_GROUPS])


@pytest.fixture
def toy_timed() -> Hypergraph:
    edges = [Hyperedge(frozenset(g), time=float(t)) for t, g in enumerate(TOY_GROUPS, start=1)]
    return Hypergraph(5, edges)
