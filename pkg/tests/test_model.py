import math

import pytest
from hypothesis import given, settings, strategies as st

from covercalc.errors import InputError, ResourceError
from covercalc.model import (
    CayleyZk,
    EndSpec,
    FiniteGraph,
    Named,
    Ray,
    RegularTree,
    Unrecognized,
    _components,
    build_named,
    census,
    classify_named,
    end_spec_of,
    genus_class,
    genus_lower_bound,
    named_from_type,
    type_of,
)
from covercalc.surfaces import FiniteSurface

from oracles import annulus_components

INFINITE = [Named.FLUTE, Named.LOCH_NESS, Named.SPOTTED_LOCH_NESS, Named.CANTOR_TREE, Named.BLOOMING_CANTOR_TREE]


@pytest.mark.parametrize("name", INFINITE)
@pytest.mark.parametrize("radius", [3, 4])
def test_named_models_classify(name, radius):
    assert classify_named(build_named(name), radius) is name


@pytest.mark.parametrize("name", INFINITE)
def test_end_space_matches_table(name):
    genus, spec = type_of(name)
    report = end_spec_of(build_named(name), 3)
    assert report.stabilized
    assert report.spec == spec
    assert genus_class(build_named(name), 3) == genus


@pytest.mark.parametrize("name", INFINITE)
@pytest.mark.parametrize("radius", [2, 3])
def test_component_counts_match_plain_bfs(name, radius):
    G = build_named(name)
    ours = _components(G, radius, 3 * radius)
    theirs = annulus_components(G.neighbors, G.root, G.depth, radius, 3 * radius)
    assert len(ours) == len(theirs)


def test_cantor_tree_component_count():
    # 3 * 2^R components of the complement of ball(R), frozen from plain BFS
    G = build_named(Named.CANTOR_TREE)
    assert [census(G, r).components for r in (2, 3, 4)] == [12, 24, 48]


def test_lnm_is_one_ended():
    G = build_named(Named.LOCH_NESS)
    c = census(G, 3)
    assert c.components == 1 and c.isolated_genus == 1


def test_genus_grows_on_lnm():
    G = build_named(Named.LOCH_NESS)
    assert genus_lower_bound(G, 3) < genus_lower_bound(G, 4)
    assert genus_class(G, 3) == math.inf


def test_plain_line_has_two_planar_ends():
    G = CayleyZk(1, piece_genus=0)
    assert end_spec_of(G, 3).spec == EndSpec("FinitePlanar", 2)
    assert classify_named(G) is Named.ANNULUS


def test_planar_ray_is_the_plane():
    assert classify_named(Ray(piece_genus=0)) is Named.PLANE


def test_torus_ray_is_lnm():
    assert classify_named(Ray(piece_genus=1)) is Named.LOCH_NESS


def test_finite_graph_genus_includes_cycles():
    G = FiniteGraph({0: [1, 1], 1: [0, 0]}, {0: (1, 0), 1: (0, 2)})
    assert G.total_genus() == 2
    assert classify_named(G) == FiniteSurface(2, 0, 2)


def test_finite_graph_must_be_symmetric():
    with pytest.raises(InputError):
        FiniteGraph({0: [1], 1: []})


def test_reverse_slots_are_involutions():
    for G in [build_named(n) for n in INFINITE]:
        for v in G.ball(3):
            for s in range(G.degree(v)):
                u = G.neighbor(v, s)
                t = G.reverse_slot(v, s)
                assert G.neighbor(u, t) == v
                assert G.reverse_slot(u, t) == s


def test_piece_has_one_boundary_per_slot():
    G = build_named(Named.BLOOMING_CANTOR_TREE)
    assert G.piece(G.root) == FiniteSurface(1, 4, 0)


def test_ball_bound_enforced():
    G = RegularTree(4, piece_genus=1)
    with pytest.raises(ResourceError):
        G.ball(9, max_size=1000)


def test_ball_bound_from_environment(monkeypatch):
    monkeypatch.setenv("COVERCALC_MAX_BALL", "50")
    G = RegularTree(3)
    with pytest.raises(ResourceError):
        G.ball(6)


def test_named_from_type_round_trip():
    for name in Named:
        genus, spec = type_of(name)
        assert named_from_type(genus, spec) is name
    assert isinstance(named_from_type(2, EndSpec("CantorPlanar")), Unrecognized)


def test_finite_named_has_no_model():
    with pytest.raises(InputError):
        build_named(Named.TORUS)


def test_end_spec_validation():
    with pytest.raises(InputError):
        EndSpec("FiniteMixed", 2, 0)
    with pytest.raises(InputError):
        EndSpec("Bogus")
    assert EndSpec.finite(0, 0).tag == "Empty"


def test_dot_output_lists_edges():
    dot = build_named(Named.CANTOR_TREE).to_dot(2)
    assert dot.startswith("graph pieces {")
    assert dot.count("--") == 9


@settings(max_examples=30, deadline=None)
@given(st.integers(3, 5), st.integers(0, 2))
def test_regular_trees_have_cantor_ends(valence, genus):
    G = RegularTree(valence, piece_genus=genus)
    report = end_spec_of(G, 3)
    assert report.stabilized
    assert report.spec.tag == ("CantorAllGenus" if genus else "CantorPlanar")
