import pytest
from hypothesis import given, settings, strategies as st

from covercalc.dsl import AiSpec, DslError, HomSpec, Request, SurfaceSpec, merge, parse_dsl


def test_basic_request():
    req = parse_dsl(
        """
        # once-holed torus
        command mod-n
        surface g=1 b=1 p=0
        n 2 3
        """
    )
    assert req.command == "mod-n"
    assert req.surface == SurfaceSpec(None, 1, 1, 0)
    assert req.n == (2, 3)


def test_hom_forms():
    req = parse_dsl("hom target=(Z/3)^2 images: a1->(1,0), b1->(0,1)\n")
    assert req.hom == HomSpec("abelian", 3, 2, (("a1", (1, 0)), ("b1", (0, 1))))
    req = parse_dsl("hom target=S3 images: c1->(0 1), c2->(1 2) irregular\n")
    assert req.hom.kind == "perm" and not req.hom.regular
    assert req.hom.images[1] == ("c2", ((1, 2),))
    assert parse_dsl("hom mod-n 5").hom == HomSpec("mod-n", 5)


def test_aifn_forms_agree():
    a = parse_dsl("aifn default=0 vals: (1,1) (a,1) (a^2,1)").aifn
    b = parse_dsl("aifn {default: 0, values: [(1, 1), (a, 1), (a^2, 1)]}").aifn
    assert a == b
    assert a.values[0] == ((), 1)
    assert a.values[2] == ((("a", 2),), 1)


def test_named_surface():
    assert parse_dsl("source named=flute").source == SurfaceSpec(named="flute")


@pytest.mark.parametrize(
    "text, line, column",
    [
        ("surface g=1 q=2", 1, 13),
        ("command mod-n\ncommand uac", 2, 1),
        ("surface g=x", 1, 11),
        ("hom target=(Z/2)^2 images: a1->(1)", 1, 28),
        ("n 2 x", 1, 5),
        ("subgroup gens: a b, , b", 1, 20),
        ("bogus 1", 1, 1),
        ("classify s t^0", 1, 12),
    ],
)
def test_error_positions(text, line, column):
    with pytest.raises(DslError) as info:
        parse_dsl(text)
    assert (info.value.line, info.value.column) == (line, column)


def test_merge_prefers_overrides():
    base = parse_dsl("command uac\nradius 3")
    assert merge(base, radius=5, group=None).radius == 5
    assert merge(base, radius=None).radius == 3


names = st.sampled_from(["a1", "b1", "c1", "a", "b", "s", "t"])
tokens = st.lists(st.tuples(names, st.integers(-3, 3).filter(bool)), max_size=4).map(tuple)
surfaces = st.one_of(
    st.builds(SurfaceSpec, st.none(), st.integers(0, 3), st.integers(0, 3), st.integers(0, 3)),
    st.sampled_from(["flute", "lnm", "bct", "torus"]).map(lambda n: SurfaceSpec(named=n)),
)
homs = st.one_of(
    st.builds(HomSpec, st.just("mod-n"), st.integers(2, 9)),
    st.builds(
        lambda n, vecs, reg: HomSpec("abelian", n, 2, tuple((f"a{i + 1}", v) for i, v in enumerate(vecs)), reg),
        st.integers(2, 5),
        st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4)), min_size=1, max_size=3),
        st.booleans(),
    ),
    st.builds(
        lambda img, reg: HomSpec("perm", 3, 0, (("c1", img),), reg),
        st.sampled_from([((0, 1),), ((0, 1, 2),), ()]),
        st.booleans(),
    ),
)
requests = st.builds(
    Request,
    command=st.sampled_from([None, "uac", "mod-n", "tree"]),
    surface=st.none() | surfaces,
    target=st.none() | surfaces,
    hom=st.none() | homs,
    group=st.sampled_from([None, "Z", "F2", "Z/2*Z/3"]),
    subgroup=st.none() | st.lists(tokens, min_size=1, max_size=3).map(tuple),
    aifn=st.none() | st.builds(AiSpec, st.integers(-2, 2), st.lists(st.tuples(tokens, st.integers(-3, 3)), max_size=3).map(tuple)),
    radius=st.none() | st.integers(1, 9),
    n=st.none() | st.lists(st.integers(2, 7), min_size=1, max_size=3).map(tuple),
    classify=st.none() | tokens,
)


@settings(max_examples=150, deadline=None)
@given(requests)
def test_round_trip(req):
    assert parse_dsl(req.to_dsl()) == req
