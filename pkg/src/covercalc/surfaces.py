"""Finite-type surfaces and their finite covers.

The topological type of a finite cover is pinned down by three numbers:
the degree, the Euler characteristic (multiplicative in the degree) and
how each peripheral curve lifts. A peripheral curve whose image in the
deck group has order ``k`` lifts to ``degree / k`` curves, each wrapping
``k`` times.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import InputError, NotAHomomorphismError
from .quotient import (
    Abelian,
    FiniteQuotientHom,
    Permutation,
    coset_action,
    cycles,
    image_order,
    orbit,
)
from .words import Naming, Word, commutator, invert, multiply


@dataclass(frozen=True, order=True)
class FiniteSurface:
    """S^b_{g,p}: genus ``g``, ``b`` boundary circles, ``p`` punctures."""

    g: int
    b: int = 0
    p: int = 0

    def __post_init__(self):
        if min(self.g, self.b, self.p) < 0:
            raise InputError(f"negative surface parameter in {self}")

    @property
    def euler_characteristic(self) -> int:
        return 2 - 2 * self.g - self.b - self.p

    chi = euler_characteristic

    @property
    def n_peripheral(self) -> int:
        return self.b + self.p

    @property
    def is_closed(self) -> bool:
        return self.b + self.p == 0

    @property
    def rank(self) -> int:
        """Rank of the free group pi_1 (open case) or 2g (closed case)."""
        if self.is_closed:
            return 2 * self.g
        return 2 * self.g + self.b + self.p - 1

    @property
    def has_nonabelian_pi1(self) -> bool:
        return self.g >= 2 if self.is_closed else self.rank >= 2

    def naming(self) -> Naming:
        return Naming("surface", self.g)

    def capped(self) -> "FiniteSurface":
        """Glue a disc onto every boundary circle."""
        return FiniteSurface(self.g, 0, self.p)

    def interior(self) -> "FiniteSurface":
        """Boundary circles become punctures."""
        return FiniteSurface(self.g, 0, self.b + self.p)

    def filled(self) -> "FiniteSurface":
        """Fill in every puncture."""
        return FiniteSurface(self.g, self.b, 0)

    def to_dict(self) -> dict:
        return {"g": self.g, "b": self.b, "p": self.p}

    def __str__(self):
        return f"S(g={self.g}, b={self.b}, p={self.p})"


def surface_relator(S: FiniteSurface) -> Word:
    """prod [a_i, b_i] * prod c_j over all peripherals (trivial in pi_1)."""
    handles = [commutator((2 * i + 1,), (2 * i + 2,)) for i in range(S.g)]
    return multiply(*handles)


def peripheral_words(S: FiniteSurface) -> list:
    """One word per boundary circle or puncture, in the free basis.

    The first ``b + p - 1`` are the generators ``c_j``; the last closes up
    the surface relation. Boundary circles come first, then punctures.
    """
    if S.is_closed:
        return []
    k = S.n_peripheral
    cs = [(2 * S.g + j,) for j in range(1, k)]
    last = invert(multiply(surface_relator(S), *cs))
    return cs + [last]


def peripheral_kinds(S: FiniteSurface) -> list:
    return ["boundary"] * S.b + ["puncture"] * S.p


def mod_n_hom(S: FiniteSurface, n: int) -> FiniteQuotientHom:
    """pi_1(S) -> H_1(S; Z/n), each basis generator to a basis vector."""
    if n < 2:
        raise InputError(f"modulus must be at least 2, got {n}")
    r = S.rank
    images = tuple(tuple(1 if i == j else 0 for j in range(r)) for i in range(r))
    return FiniteQuotientHom(r, Abelian((n,) * r), images)


def trivial_hom(S: FiniteSurface) -> FiniteQuotientHom:
    return FiniteQuotientHom(S.rank, Abelian(()), ((),) * S.rank)


@dataclass(frozen=True)
class PeripheralLift:
    """How one base peripheral curve lifts: ``cycles`` maps wrap order to count."""

    kind: str
    cycles: tuple  # ((order, count), ...)

    @property
    def lift_count(self) -> int:
        return sum(c for _, c in self.cycles)

    @property
    def order(self) -> int:
        orders = {o for o, _ in self.cycles}
        if len(orders) != 1:
            raise ValueError("lifts have different orders (irregular cover)")
        return orders.pop()

    @property
    def covered_degree(self) -> int:
        return sum(o * c for o, c in self.cycles)


@dataclass(frozen=True)
class CoverResult:
    degree: int
    cover: FiniteSurface
    peripheral_lifts: tuple
    regular: bool = True

    def to_dict(self) -> dict:
        lifts = []
        for j, lift in enumerate(self.peripheral_lifts):
            for order, count in lift.cycles:
                lifts.append({"peripheral": j, "kind": lift.kind, "order": order, "count": count})
        return {
            "degree": self.degree,
            "cover": self.cover.to_dict(),
            "peripheral_lifts": lifts,
            "regular": self.regular,
        }


def _check_relator(S: FiniteSurface, hom: FiniteQuotientHom):
    if hom.ambient_rank != S.rank:
        raise InputError(f"homomorphism has rank {hom.ambient_rank}, surface basis has {S.rank}")
    if S.is_closed and not hom.is_trivial_on(surface_relator(S)):
        raise NotAHomomorphismError("images do not kill the surface relator")


def _solve_genus(S: FiniteSurface, degree: int, lifts) -> FiniteSurface:
    b = sum(l.lift_count for l in lifts if l.kind == "boundary")
    p = sum(l.lift_count for l in lifts if l.kind == "puncture")
    twice_g = 2 - degree * S.euler_characteristic - b - p
    assert twice_g >= 0 and twice_g % 2 == 0, "cover genus is not a nonnegative integer"
    return FiniteSurface(twice_g // 2, b, p)


def cover_type(S: FiniteSurface, hom: FiniteQuotientHom, regular: bool = True, max_order=None) -> CoverResult:
    """Topological type of the cover of ``S`` determined by ``hom``.

    Regular: the cover of ``ker hom``, degree ``|image|``. Irregular
    (permutation targets only): the cover of the stabiliser of point 0,
    degree the orbit size, peripherals lift along the cycles of their
    permutation on that orbit.
    """
    _check_relator(S, hom)
    kinds = peripheral_kinds(S)
    q = hom.target
    lifts = []
    if regular:
        degree = image_order(hom) if isinstance(q, Abelian) else coset_action(hom, max_order).order
        for kind, w in zip(kinds, peripheral_words(S)):
            k = q.order(hom.evaluate(w))
            assert degree % k == 0
            lifts.append(PeripheralLift(kind, ((k, degree // k),)))
    else:
        if not isinstance(q, Permutation):
            raise InputError("irregular covers need a permutation target")
        pts = orbit(hom.images, 0)
        where = {x: i for i, x in enumerate(pts)}
        degree = len(pts)
        for kind, w in zip(kinds, peripheral_words(S)):
            perm = hom.evaluate(w)
            restricted = tuple(where[perm[x]] for x in pts)
            counts = {}
            for c in cycles(restricted):
                counts[len(c)] = counts.get(len(c), 0) + 1
            lifts.append(PeripheralLift(kind, tuple(sorted(counts.items()))))
    result = CoverResult(degree, _solve_genus(S, degree, lifts), tuple(lifts), regular)
    assert result.cover.euler_characteristic == degree * S.euler_characteristic
    for lift in lifts:
        assert lift.covered_degree == degree
    return result


def lifts_closed(w: Sequence[int], hom: FiniteQuotientHom) -> bool:
    """Whether the loop ``w`` lifts to a closed loop in the regular cover."""
    return hom.is_trivial_on(w)
