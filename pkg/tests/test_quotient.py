import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from covercalc.errors import InputError, ResourceError, UnsupportedError
from covercalc.quotient import (
    Abelian,
    Permutation,
    abelian_hom,
    coset_action,
    cycles,
    enumerate_image,
    image_order,
    orbit,
    permutation_hom,
)


def test_permutation_composition_applies_left_first():
    P = Permutation(3)
    p, q = (1, 0, 2), (0, 2, 1)
    assert P.mul(p, q) == (2, 0, 1)
    assert P.mul(p, P.inv(p)) == P.identity()


def test_cycles_and_orbit():
    assert sorted(map(len, cycles((1, 0, 3, 4, 2)))) == [2, 3]
    assert sorted(orbit([(1, 0, 2, 3)], 0)) == [0, 1]


def test_abelian_order_of_element():
    A = Abelian((4, 6))
    assert A.order((2, 3)) == 2
    assert A.order((1, 1)) == 12


def test_image_order_of_mod_n_map():
    hom = abelian_hom(2, (3, 3), [(1, 0), (0, 1)])
    assert image_order(hom) == 9
    hom = abelian_hom(2, (4, 4), [(2, 2), (0, 2)])
    assert image_order(hom) == 4


def test_image_order_rejects_infinite_target():
    with pytest.raises(UnsupportedError):
        image_order(abelian_hom(1, (0,), [(1,)]))


def test_wrong_image_count_rejected():
    with pytest.raises(InputError):
        abelian_hom(2, (2,), [(1,)])


def test_bad_permutation_rejected():
    with pytest.raises(InputError):
        permutation_hom(1, 3, [(0, 0, 1)])


def test_group_order_bound():
    hom = permutation_hom(2, 6, [(1, 2, 3, 4, 5, 0), (1, 0, 2, 3, 4, 5)])
    with pytest.raises(ResourceError):
        enumerate_image(hom, max_order=100)
    assert len(enumerate_image(hom)) == 720


def test_coset_action_is_regular():
    hom = permutation_hom(2, 3, [(1, 2, 0), (1, 0, 2)])
    action = coset_action(hom)
    assert action.order == 6
    for perm in action.permutations:
        assert sorted(perm) == list(range(6))
    # a word acts trivially exactly when its image is trivial
    for w in [(1, 1, 1), (2, 2), (1, 2), (1, 2, 1, 2, 1, 2)]:
        trivial = action.act(w) == tuple(range(6))
        assert trivial == hom.is_trivial_on(w)


@settings(max_examples=80, deadline=None)
@given(
    st.lists(st.integers(2, 6), min_size=1, max_size=3),
    st.integers(1, 3),
    st.data(),
)
def test_image_order_matches_enumeration(factors, rank, data):
    images = [tuple(data.draw(st.integers(0, n - 1)) for n in factors) for _ in range(rank)]
    hom = abelian_hom(rank, factors, images)
    assert image_order(hom) == len(enumerate_image(hom))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(2, 5), min_size=1, max_size=3), st.data())
def test_image_order_matches_brute_span(factors, data):
    rank = 2
    images = [tuple(data.draw(st.integers(0, n - 1)) for n in factors) for _ in range(rank)]
    span = set()
    top = math.lcm(*factors)
    for coeffs in itertools.product(range(top), repeat=rank):
        span.add(tuple(sum(c * v[i] for c, v in zip(coeffs, images)) % n for i, n in enumerate(factors)))
    assert image_order(abelian_hom(rank, factors, images)) == len(span)
