import pytest

from covercalc.errors import InputError
from covercalc.forge import (
    GraphCoverMap,
    characteristic_constraint,
    check_cover,
    classify_mod_n_cover_infinite,
    classify_uac,
    embed_in_bct,
    everything_covers_chain,
    graph_universal_cover,
    pants_generators,
    subsurface_cover,
    uac_approximation_evidence,
)
from covercalc.model import INF, EndSpec, FiniteGraph, Named, build_named, classify_named
from covercalc.surfaces import FiniteSurface

PANTS = FiniteSurface(0, 0, 3)


def exponent_sums(word):
    """Slot 2i is +e_i and slot 2i+1 is -e_i in the Z^2 model."""
    v = [0, 0]
    for s in word:
        v[s // 2] += -1 if s % 2 else 1
    return tuple(v)


def test_universal_cover_of_lnm_is_a_cover():
    m = graph_universal_cover(build_named(Named.LOCH_NESS))
    check = check_cover(m, 5)
    assert check.ok and check.checked == 1 + 4 * (3**5 - 1) // 2
    assert classify_named(m.total) is Named.BLOOMING_CANTOR_TREE


def test_deck_property_on_z2():
    m = graph_universal_cover(build_named(Named.LOCH_NESS))
    by_projection, by_sums = {}, {}
    for w in m.total.ball(5):
        by_projection.setdefault(m.vertex_map(w), set()).add(w)
        by_sums.setdefault(exponent_sums(w), set()).add(w)
    assert sorted(map(sorted, by_projection.values())) == sorted(map(sorted, by_sums.values()))


def test_bad_map_is_caught():
    base = build_named(Named.LOCH_NESS)
    m = GraphCoverMap(graph_universal_cover(base).total, base, lambda w: (0, 0))
    check = check_cover(m, 2)
    assert not check.ok
    assert {v["problem"] for v in check.violations} == {"edge"}


def test_universal_cover_of_a_finite_graph():
    theta = FiniteGraph({0: [1, 1, 1], 1: [0, 0, 0]}, {0: (0, 0), 1: (0, 0)})
    m = graph_universal_cover(theta)
    assert check_cover(m, 4).ok
    assert classify_named(m.total) is Named.CANTOR_TREE


def test_pants_subsurface_cover():
    step = subsurface_cover(FiniteSurface(0, 0, 5), [(1,), (2,)], PANTS)
    assert step.ok
    assert step.source == PANTS
    assert step.certificate["fold_rank"] == 2 and step.certificate["index"] is None


def test_cyclic_subsurface_cover_is_annulus():
    step = subsurface_cover(FiniteSurface(1, 1, 0), [(1,)], FiniteSurface(0, 2, 0))
    assert step.source == FiniteSurface(0, 0, 2)


def test_dependent_generators_rejected_with_witness():
    with pytest.raises(InputError, match="relation"):
        subsurface_cover(FiniteSurface(0, 0, 3), [(1,), (1, 1)], PANTS)


def test_rank_mismatch_rejected():
    with pytest.raises(InputError, match="subsurface rank"):
        subsurface_cover(FiniteSurface(0, 0, 5), [(1,), (2,), (3,)], PANTS)


def test_closed_ambient_rejected():
    with pytest.raises(InputError):
        subsurface_cover(FiniteSurface(2), [(1,)], FiniteSurface(0, 2, 0))


def test_pants_choice():
    assert pants_generators(FiniteSurface(1, 0, 3)) == (FiniteSurface(1, 0, 3), [(3,), (4,)])
    assert pants_generators(FiniteSurface(2)) == (FiniteSurface(1, 1, 0), [(1,), (2, -1, -2)])


@pytest.mark.parametrize(
    "surface, expected",
    [
        (FiniteSurface(0, 0, 1), Named.PLANE),
        (FiniteSurface(0, 0, 2), Named.PLANE),
        (FiniteSurface(1), Named.PLANE),
        (FiniteSurface(0), Named.SPHERE),
        (FiniteSurface(1, 0, 1), Named.FLUTE),
        (FiniteSurface(2, 0, 1), Named.SPOTTED_LOCH_NESS),
        (PANTS, Named.LOCH_NESS),
        (FiniteSurface(2), Named.LOCH_NESS),
        (Named.CANTOR_TREE, Named.LOCH_NESS),
        (Named.TORUS, Named.PLANE),
    ],
)
def test_uac_examples(surface, expected):
    assert classify_uac(surface) is expected


def test_uac_constraint_exceptions_are_exactly_the_sphere():
    inputs = [FiniteSurface(g, 0, k) for g in range(4) for k in range(5)] + list(Named)
    failures = {classify_uac(x) for x in inputs if not characteristic_constraint(classify_uac(x))}
    assert failures == {Named.SPHERE}


def test_uac_evidence_for_pants():
    ev = uac_approximation_evidence(PANTS, (2, 3, 4))
    assert [ev.covers[n].cover.g for n in (2, 3, 4)] == [0, 1, 3]
    assert [ev.covers[n].cover.p for n in (2, 3, 4)] == [6, 9, 12]
    assert ev.deck_rank == 2 and ev.consistent


def test_uac_evidence_for_punctured_torus():
    ev = uac_approximation_evidence(FiniteSurface(1, 0, 1), (2, 3))
    assert [ev.covers[n].cover.g for n in (2, 3)] == [1, 1]
    assert [ev.covers[n].cover.p for n in (2, 3)] == [4, 9]
    assert ev.predicted is Named.FLUTE and ev.consistent


def test_uac_evidence_needs_nonabelian_group():
    with pytest.raises(InputError):
        uac_approximation_evidence(FiniteSurface(0, 0, 2))


@pytest.mark.parametrize(
    "name, n, expected",
    [
        (Named.LOCH_NESS, 2, Named.LOCH_NESS),
        (Named.SPOTTED_LOCH_NESS, 5, Named.SPOTTED_LOCH_NESS),
        (Named.FLUTE, 3, Named.SPOTTED_LOCH_NESS),
        (Named.CANTOR_TREE, 2, Named.LOCH_NESS),
        (Named.BLOOMING_CANTOR_TREE, 4, Named.LOCH_NESS),
    ],
)
def test_mod_n_infinite(name, n, expected):
    assert classify_mod_n_cover_infinite(build_named(name), n) is expected


def test_mod_n_infinite_errors():
    with pytest.raises(InputError):
        classify_mod_n_cover_infinite(build_named(Named.LOCH_NESS), 1)
    with pytest.raises(InputError):
        classify_mod_n_cover_infinite(FiniteGraph({0: []}), 2)


def test_characteristic_constraint():
    assert characteristic_constraint(Named.LOCH_NESS)
    assert characteristic_constraint(Named.PLANE)
    assert not characteristic_constraint(Named.CANTOR_TREE)


@pytest.mark.parametrize(
    "genus, spec",
    [
        (INF, EndSpec("FiniteMixed", 0, 1)),
        (0, EndSpec("CantorPlanar")),
        (INF, EndSpec("OmegaPlusOneGenusLimit")),
        (0, EndSpec("FinitePlanar", 2)),
        (INF, EndSpec("FiniteMixed", 2, 2)),
    ],
)
def test_embedding_round_trip(genus, spec):
    assert embed_in_bct(genus, spec).classify() == (genus, spec)


def test_embedding_with_closed_summand():
    sel = embed_in_bct(0, EndSpec("FinitePlanar", 1), closed_summand=2)
    assert sel.classify() == (2, EndSpec("FinitePlanar", 1))


def test_cantor_planar_keeps_no_tori():
    sel = embed_in_bct(0, EndSpec("CantorPlanar"))
    xs, ts = sel.selected(3)
    assert len(xs) == 15 and not ts
    assert sel.complement_report(3)["discs"] == 0


def test_spotted_embedding_deletes_rays():
    sel = embed_in_bct(INF, EndSpec("OmegaPlusOneGenusLimit"))
    assert sel.ray_deletions(3)


def test_unrealizable_embeddings_rejected():
    with pytest.raises(InputError):
        embed_in_bct(0, EndSpec("CantorAllGenus"))
    with pytest.raises(InputError):
        embed_in_bct(INF, EndSpec("Empty"))
    with pytest.raises(InputError):
        embed_in_bct(3, EndSpec("FinitePlanar", 1))


def test_chain_flute_to_pants():
    chain = everything_covers_chain(Named.FLUTE, PANTS)
    assert chain.ok
    assert [s.kind for s in chain.steps] == ["SubsurfaceCover", "UniversalAbelian", "GraphCover", "SubsurfaceCover"]
    assert chain.steps[-1].source is Named.FLUTE and chain.steps[0].target == PANTS
    assert chain.to_dot().count("->") == 4


def test_chain_into_closed_surface():
    chain = everything_covers_chain(Named.CANTOR_TREE, FiniteSurface(2))
    assert chain.ok
    assert chain.steps[0].certificate["embedded_in"] == FiniteSurface(2).to_dict()


def test_chain_into_piece_graph_target():
    assert everything_covers_chain(Named.LOCH_NESS, build_named(Named.LOCH_NESS)).ok


def test_chain_from_end_space_source():
    assert everything_covers_chain((0, EndSpec("FinitePlanar", 3)), PANTS).ok


@pytest.mark.parametrize("target", [FiniteSurface(1), FiniteSurface(0, 0, 2)])
def test_chain_rejects_abelian_targets(target):
    with pytest.raises(InputError):
        everything_covers_chain(Named.FLUTE, target)


def test_chain_rejects_compact_source():
    with pytest.raises(InputError):
        everything_covers_chain(Named.TORUS, PANTS)
