"""Homomorphisms from a free group onto finite abelian or permutation groups."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Sequence

from . import config
from .errors import InputError, ResourceError, UnsupportedError
from .words import max_letter


@dataclass(frozen=True)
class Abelian:
    """Z/n1 x ... x Z/nr; a factor 0 stands for Z."""

    factors: tuple

    @property
    def is_finite(self) -> bool:
        return all(n > 0 for n in self.factors)

    def normalize(self, v) -> tuple:
        if len(v) != len(self.factors):
            raise InputError(f"image {tuple(v)} has wrong length for {self.factors}")
        return tuple(x % n if n else x for x, n in zip(v, self.factors))

    def identity(self) -> tuple:
        return (0,) * len(self.factors)

    def mul(self, u, v) -> tuple:
        return self.normalize([a + b for a, b in zip(u, v)])

    def inv(self, u) -> tuple:
        return self.normalize([-a for a in u])

    def order(self, v) -> int:
        if not self.is_finite:
            if any(x and not n for x, n in zip(v, self.factors)):
                return math.inf
        out = 1
        for x, n in zip(v, self.factors):
            if n:
                out = math.lcm(out, n // math.gcd(x, n))
        return out

    def describe(self) -> str:
        if not self.factors:
            return "1"
        if len(set(self.factors)) == 1:
            n = self.factors[0]
            base = "Z" if n == 0 else f"Z/{n}"
            return base if len(self.factors) == 1 else f"({base})^{len(self.factors)}"
        return " x ".join("Z" if n == 0 else f"Z/{n}" for n in self.factors)


@dataclass(frozen=True)
class Permutation:
    """Permutations of ``{0, ..., degree-1}``; a permutation is a tuple of images.

    Composition is left to right: ``mul(p, q)`` applies ``p`` first, so a
    word acts on points from the right.
    """

    degree: int

    is_finite = True

    def normalize(self, p) -> tuple:
        p = tuple(p)
        if sorted(p) != list(range(self.degree)):
            raise InputError(f"{p} is not a permutation of {self.degree} points")
        return p

    def identity(self) -> tuple:
        return tuple(range(self.degree))

    def mul(self, p, q) -> tuple:
        return tuple(q[p[i]] for i in range(self.degree))

    def inv(self, p) -> tuple:
        out = [0] * self.degree
        for i, j in enumerate(p):
            out[j] = i
        return tuple(out)

    def order(self, p) -> int:
        out = 1
        for c in cycles(p):
            out = math.lcm(out, len(c))
        return out

    def describe(self) -> str:
        return f"S{self.degree}"


def cycles(p: Sequence[int]) -> list:
    seen = set()
    out = []
    for start in range(len(p)):
        if start in seen:
            continue
        c = []
        x = start
        while x not in seen:
            seen.add(x)
            c.append(x)
            x = p[x]
        out.append(tuple(c))
    return out


@dataclass(frozen=True)
class FiniteQuotientHom:
    """A homomorphism F_rank -> Q given by the images of the free generators."""

    ambient_rank: int
    target: object
    images: tuple

    def __post_init__(self):
        if len(self.images) != self.ambient_rank:
            raise InputError(f"need {self.ambient_rank} images, got {len(self.images)}")
        object.__setattr__(self, "images", tuple(self.target.normalize(x) for x in self.images))

    def evaluate(self, w: Sequence[int]):
        if max_letter(w) > self.ambient_rank:
            raise InputError(f"word uses letters beyond rank {self.ambient_rank}")
        q = self.target
        out = q.identity()
        for x in w:
            img = self.images[abs(x) - 1]
            out = q.mul(out, img if x > 0 else q.inv(img))
        return out

    def is_trivial_on(self, w: Sequence[int]) -> bool:
        return self.evaluate(w) == self.target.identity()

    def compose(self, automorphism) -> "FiniteQuotientHom":
        """Post-compose with a map ``Q -> Q`` given as a callable on elements."""
        return FiniteQuotientHom(self.ambient_rank, self.target, tuple(automorphism(x) for x in self.images))


def abelian_hom(rank: int, factors: Sequence[int], images) -> FiniteQuotientHom:
    return FiniteQuotientHom(rank, Abelian(tuple(factors)), tuple(tuple(v) for v in images))


def permutation_hom(rank: int, degree: int, images) -> FiniteQuotientHom:
    return FiniteQuotientHom(rank, Permutation(degree), tuple(tuple(p) for p in images))


def _lattice_index(rows: list, dim: int) -> int:
    """[Z^dim : L] for the full-rank lattice L spanned by integer ``rows``."""
    rows = [list(r) for r in rows if any(r)]
    index = 1
    for col in range(dim):
        live = [r for r in rows if r[col] != 0]
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            pivot = live[0]
            for r in live[1:]:
                q = r[col] // pivot[col]
                for k in range(dim):
                    r[k] -= q * pivot[k]
            live = [r for r in live if r[col] != 0]
        if not live:
            return 0
        pivot = live[0]
        index *= abs(pivot[col])
        rows = [r for r in rows if r is not pivot and any(r)]
    return index


def image_order(hom: FiniteQuotientHom) -> int:
    """Order of the image of ``hom`` (without enumerating it for abelian targets)."""
    q = hom.target
    if isinstance(q, Abelian):
        if not q.is_finite:
            raise UnsupportedError("target has an infinite factor")
        r = len(q.factors)
        if r == 0:
            return 1
        relations = [[n if i == j else 0 for j in range(r)] for i, n in enumerate(q.factors)]
        idx = _lattice_index([list(v) for v in hom.images] + relations, r)
        return math.prod(q.factors) // idx
    return len(enumerate_image(hom))


def enumerate_image(hom: FiniteQuotientHom, max_order=None) -> list:
    """Elements of the image in BFS order from the identity."""
    q = hom.target
    if not q.is_finite:
        raise UnsupportedError("coset action needs a finite target")
    bound = max_order if max_order is not None else config.DEFAULT_MAX_GROUP_ORDER
    gens = [g for g in hom.images]
    gens += [q.inv(g) for g in gens]
    start = q.identity()
    seen = {start: 0}
    order = [start]
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = q.mul(x, g)
            if y not in seen:
                seen[y] = len(order)
                order.append(y)
                if len(order) > bound:
                    raise ResourceError(f"image group exceeds order bound {bound}")
                queue.append(y)
    return order


@dataclass(frozen=True)
class CosetAction:
    """Right-regular action of Q = image(hom) on itself.

    ``permutations[i]`` is the action of free generator ``i+1``: element
    index ``k`` goes to the index of ``elements[k] * image``.
    """

    order: int
    elements: tuple
    permutations: tuple

    def act(self, w: Sequence[int]) -> tuple:
        perm = Permutation(self.order)
        out = perm.identity()
        for x in w:
            p = self.permutations[abs(x) - 1]
            out = perm.mul(out, p if x > 0 else perm.inv(p))
        return out


def coset_action(hom: FiniteQuotientHom, max_order=None) -> CosetAction:
    """Permutation representation of the regular cover of ``ker hom``."""
    elements = enumerate_image(hom, max_order)
    index = {x: i for i, x in enumerate(elements)}
    q = hom.target
    perms = tuple(tuple(index[q.mul(x, g)] for x in elements) for g in hom.images)
    return CosetAction(len(elements), tuple(elements), perms)


def orbit(points_perms: Sequence[Sequence[int]], start: int = 0) -> list:
    """Orbit of ``start`` under the group generated by the given permutations."""
    seen = {start}
    order = [start]
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for p in points_perms:
            for y in (p[x], p.index(x)):
                if y not in seen:
                    seen.add(y)
                    order.append(y)
                    queue.append(y)
    return order
