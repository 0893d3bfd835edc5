import random

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from covercalc.errors import InputError
from covercalc.trees import (
    CommonFixedVertex,
    Elliptic,
    FreeProductAction,
    HypothesisFails,
    Hyperbolic,
)

MODULAR = FreeProductAction((2, 3))
FREE = FreeProductAction((0, 0))


def random_word(rng, letters, n):
    return tuple(rng.choice(letters) for _ in range(n))


def test_needs_two_factors():
    with pytest.raises(InputError):
        FreeProductAction((2,))


def test_examples():
    assert isinstance(MODULAR.classify_isometry((1,)), Elliptic)
    assert isinstance(MODULAR.classify_isometry((2, 1, -2)), Elliptic)
    assert MODULAR.classify_isometry((1, 2)) == Hyperbolic(2)
    assert FREE.classify_isometry((1, 2, -1, -2)) == Hyperbolic(4)


def test_elliptic_vertex_is_fixed():
    w = (2, 1, 2, 1, -2, -1, -2)
    kind = MODULAR.classify_isometry(w)
    assert isinstance(kind, Elliptic)
    g = MODULAR.normal_form(w)
    assert MODULAR.act(g, kind.vertex) == kind.vertex


def test_distance_matches_bfs():
    graph = MODULAR.ball_graph(5)
    nodes = sorted(graph.nodes, key=repr)
    rng = random.Random(7)
    for _ in range(300):
        u, v = rng.choice(nodes), rng.choice(nodes)
        assert MODULAR.distance(u, v) == nx.shortest_path_length(graph, u, v)


def test_ball_is_a_tree():
    graph = FREE.ball_graph(3)
    assert nx.is_tree(graph)


def test_fixed_subtree_of_factor_element():
    fixed, hyperbolic = MODULAR.fixed_subtree((2,), 3)
    assert not hyperbolic
    assert fixed == {("v", 1, ())}
    assert MODULAR.fixed_subtree((1, 2), 3) == (frozenset(), True)


def test_serre_examples():
    assert isinstance(MODULAR.serre_criterion([(2,), (-2,)]), CommonFixedVertex)
    fails = MODULAR.serre_criterion([(1,), (2,)])
    assert isinstance(fails, HypothesisFails) and fails.witness == (0, 1)
    assert MODULAR.serre_criterion([(1, 2)]).witness == (0,)


def test_dot_highlights_fixed_vertices():
    dot = MODULAR.to_dot(2, word=(2,))
    assert dot.count("gold") == 1


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_translation_length_is_additive_on_powers(seed):
    rng = random.Random(seed)
    w = random_word(rng, [1, 2, -2], rng.randint(1, 8))
    length = MODULAR.classify_isometry(w).translation_length
    for k in range(1, 5):
        assert MODULAR.classify_isometry(w * k).translation_length == k * length


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_conjugation_invariance(seed):
    rng = random.Random(seed)
    letters = [1, -1, 2, -2]
    w = random_word(rng, letters, rng.randint(1, 6))
    u = random_word(rng, letters, rng.randint(0, 4))
    conj = u + w + tuple(-x for x in reversed(u))
    assert type(FREE.classify_isometry(conj)) is type(FREE.classify_isometry(w))
    assert FREE.classify_isometry(conj).translation_length == FREE.classify_isometry(w).translation_length


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_helly_for_fixed_subtrees(seed):
    # pairwise-intersecting fixed sets of elliptic elements share a vertex
    rng = random.Random(seed)
    u = random_word(rng, [1, 2, -2], rng.randint(0, 4))
    ui = tuple(-x for x in reversed(u))
    gens = [u + (rng.choice([2, -2]),) + ui for _ in range(3)]
    sets = [MODULAR.fixed_subtree(w, 6)[0] for w in gens]
    assert all(a & b for a in sets for b in sets)
    assert sets[0] & sets[1] & sets[2]
