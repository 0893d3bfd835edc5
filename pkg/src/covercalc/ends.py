"""Ends of groups and almost-invariant functions on Cayley graphs.

Cayley graphs here are LEFT Cayley graphs: ``g`` is joined to ``s g`` for
each generator ``s``. A function ``x: G -> Z`` acts by
``(g x)(h) = x(g^-1 h)``, and its boundary is the set of ``g`` with
``x(s g) != x(g)`` for some generator ``s``.
"""

from __future__ import annotations

import re
import threading
from collections import deque
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import networkx as nx

from . import config
from .errors import InputError, ResourceError, UnsupportedError
from .folding import fold_core_graph
from .words import reduce_word

# -- groups ------------------------------------------------------------------


class GroupSpec:
    """A finitely generated group with solvable word problem.

    Elements are hashable normal forms. Words are tuples of signed indices
    into the standard generators (``letter_count`` of them).
    """

    radial = False  # whether AiFunctions extend by truncating normal forms

    def identity(self):
        raise NotImplementedError

    def letter(self, i: int):
        """Element of the signed letter ``i``."""
        raise NotImplementedError

    @property
    def letter_count(self) -> int:
        raise NotImplementedError

    def mul(self, g, h):
        raise NotImplementedError

    def inv(self, g):
        raise NotImplementedError

    def length(self, g) -> int:
        raise NotImplementedError

    def generators(self) -> list:
        """The symmetric generating set, deduplicated, in a fixed order."""
        out = []
        for i in range(1, self.letter_count + 1):
            for s in (self.letter(i), self.letter(-i)):
                if s not in out and s != self.identity():
                    out.append(s)
        return out

    def evaluate(self, word: Sequence[int]):
        out = self.identity()
        for x in word:
            if x == 0 or abs(x) > self.letter_count:
                raise InputError(f"letter {x} is not a generator of {self.describe()}")
            out = self.mul(out, self.letter(x))
        return out

    def geodesic(self, g) -> tuple:
        """A geodesic word for ``g`` (radial groups only)."""
        raise UnsupportedError(f"{self.describe()} has no radial normal form")

    @property
    def is_finite(self) -> bool:
        return False

    def describe(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class Zk(GroupSpec):
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise InputError("Z^k needs k >= 1")

    @property
    def radial(self):
        return self.k == 1

    @property
    def letter_count(self):
        return self.k

    def identity(self):
        return (0,) * self.k

    def letter(self, i):
        v = [0] * self.k
        v[abs(i) - 1] = 1 if i > 0 else -1
        return tuple(v)

    def mul(self, g, h):
        return tuple(a + b for a, b in zip(g, h))

    def inv(self, g):
        return tuple(-a for a in g)

    def length(self, g):
        return sum(abs(a) for a in g)

    def geodesic(self, g):
        if self.k != 1:
            return super().geodesic(g)
        n = g[0]
        return (1,) * n if n >= 0 else (-1,) * (-n)

    def describe(self):
        return "Z" if self.k == 1 else f"Z^{self.k}"


@dataclass(frozen=True)
class FreeGroup(GroupSpec):
    rank: int

    radial = True

    def __post_init__(self):
        if self.rank < 1:
            raise InputError("free group rank must be at least 1")

    @property
    def letter_count(self):
        return self.rank

    def identity(self):
        return ()

    def letter(self, i):
        return (i,)

    def mul(self, g, h):
        return reduce_word(g + h)

    def inv(self, g):
        return tuple(-x for x in reversed(g))

    def length(self, g):
        return len(g)

    def geodesic(self, g):
        return g

    def describe(self):
        return f"F{self.rank}"


@dataclass(frozen=True)
class FreeProduct(GroupSpec):
    """Free product of cyclic groups; an order of 0 stands for Z.

    Elements are tuples of syllables ``(factor, exponent)`` with
    consecutive syllables in different factors.
    """

    orders: tuple

    radial = True

    def __post_init__(self):
        if not self.orders:
            raise InputError("free product needs at least one factor")
        if any(n == 1 or n < 0 for n in self.orders):
            raise InputError(f"bad factor orders {self.orders}")

    @property
    def letter_count(self):
        return len(self.orders)

    def identity(self):
        return ()

    def _norm(self, f, e):
        n = self.orders[f]
        return e % n if n else e

    def letter(self, i):
        f = abs(i) - 1
        e = self._norm(f, 1 if i > 0 else -1)
        return ((f, e),)

    def mul(self, g, h):
        out = list(g)
        for f, e in h:
            if out and out[-1][0] == f:
                e2 = self._norm(f, out[-1][1] + e)
                out.pop()
                if e2:
                    out.append((f, e2))
            else:
                out.append((f, e))
        return tuple(out)

    def inv(self, g):
        return tuple((f, self._norm(f, -e)) for f, e in reversed(g))

    def _cost(self, f, e):
        n = self.orders[f]
        return abs(e) if n == 0 else min(e, n - e)

    def length(self, g):
        return sum(self._cost(f, e) for f, e in g)

    def geodesic(self, g):
        out = []
        for f, e in g:
            n = self.orders[f]
            if n and e > n // 2:
                out += [-(f + 1)] * (n - e)
            else:
                sign = 1 if e > 0 else -1
                out += [sign * (f + 1)] * abs(e)
        return tuple(out)

    @property
    def is_finite(self):
        return len(self.orders) == 1 and self.orders[0] > 0

    def describe(self):
        return "*".join("Z" if n == 0 else f"Z/{n}" for n in self.orders)


@dataclass(frozen=True)
class FiniteTable(GroupSpec):
    """A finite group from its multiplication table; element 0 is the identity.

    ``gens`` lists the generating elements (letter ``i`` is ``gens[i-1]``).
    """

    table: tuple
    gens: tuple

    def __post_init__(self):
        n = len(self.table)
        if n == 0 or any(len(row) != n for row in self.table):
            raise InputError("multiplication table must be square")
        if tuple(self.table[0]) != tuple(range(n)):
            raise InputError("element 0 must be the identity")
        if not self.gens or any(not 0 <= s < n for s in self.gens):
            raise InputError("bad generating set")

    @classmethod
    def cyclic(cls, n: int) -> "FiniteTable":
        if n < 1:
            raise InputError("cyclic order must be positive")
        table = tuple(tuple((i + j) % n for j in range(n)) for i in range(n))
        return cls(table, (1 % n,))

    @property
    def letter_count(self):
        return len(self.gens)

    def identity(self):
        return 0

    def letter(self, i):
        s = self.gens[abs(i) - 1]
        return s if i > 0 else self.inv(s)

    def mul(self, g, h):
        return self.table[g][h]

    def inv(self, g):
        return self.table[g].index(0)

    def length(self, g):
        return _finite_lengths(self)[g]

    @property
    def is_finite(self):
        return True

    def describe(self):
        return f"finite group of order {len(self.table)}"


_finite_cache = {}


def _finite_lengths(G: FiniteTable) -> dict:
    hit = _finite_cache.get(G)
    if hit is None:
        hit = {0: 0}
        queue = deque([0])
        while queue:
            g = queue.popleft()
            for s in G.generators():
                h = G.mul(s, g)
                if h not in hit:
                    hit[h] = hit[g] + 1
                    queue.append(h)
        if len(hit) != len(G.table):
            raise InputError("generators do not generate the finite group")
        _finite_cache[G] = hit
    return hit


_GROUP = re.compile(r"^(?:Z\^?(\d+)|F(\d+)|Z)$")


def parse_group(text: str) -> GroupSpec:
    """Parse ``Z``, ``Z2``/``Z^2``, ``F2``, ``Z/5`` or products like ``Z/2*Z/3``."""
    text = text.replace(" ", "")
    if not text:
        raise InputError("empty group description")
    if "*" in text:
        orders = []
        for part in text.split("*"):
            if part == "Z":
                orders.append(0)
            elif re.fullmatch(r"Z/\d+", part):
                orders.append(int(part[2:]))
            else:
                raise InputError(f"free product factors must be Z or Z/n, got {part!r}")
        return FreeProduct(tuple(orders))
    if re.fullmatch(r"Z/\d+", text):
        return FiniteTable.cyclic(int(text[2:]))
    m = _GROUP.match(text)
    if not m:
        raise InputError(f"unknown group {text!r}; expected Z, Zk, Fr, Z/n or a product of cyclic groups")
    if m.group(1):
        return Zk(int(m.group(1)))
    if m.group(2):
        return FreeGroup(int(m.group(2)))
    return Zk(1)


def group_text(G: GroupSpec) -> str:
    """Inverse of :func:`parse_group` (finite groups only when cyclic)."""
    if isinstance(G, Zk):
        return "Z" if G.k == 1 else f"Z{G.k}"
    if isinstance(G, FreeGroup):
        return f"F{G.rank}"
    if isinstance(G, FreeProduct):
        return "*".join("Z" if n == 0 else f"Z/{n}" for n in G.orders)
    if isinstance(G, FiniteTable) and G == FiniteTable.cyclic(len(G.table)):
        return f"Z/{len(G.table)}"
    raise InputError("this group has no text form")


# -- balls -------------------------------------------------------------------

_ball_lock = threading.Lock()
_ball_cache: dict = {}


def _ball(G: GroupSpec, radius: int, max_size=None) -> dict:
    """Elements of length <= radius mapped to their length, in BFS order."""
    key = (G, radius)
    bound = config.max_ball(max_size)
    with _ball_lock:
        hit = _ball_cache.get(key)
    if hit is not None:
        if len(hit) > bound:
            raise ResourceError(f"Cayley ball of radius {radius} exceeds {bound} elements")
        return hit
    dist = {G.identity(): 0}
    queue = deque([G.identity()])
    gens = G.generators()
    while queue:
        g = queue.popleft()
        d = dist[g]
        if d == radius:
            continue
        for s in gens:
            h = G.mul(s, g)
            if h not in dist:
                dist[h] = d + 1
                if len(dist) > bound:
                    raise ResourceError(f"Cayley ball of radius {radius} exceeds {bound} elements")
                queue.append(h)
    with _ball_lock:
        _ball_cache[key] = dist
    return dist


def cayley_ball(G: GroupSpec, radius: int, max_size=None) -> nx.Graph:
    """Ball of the left Cayley graph; node attribute ``length`` is the word length."""
    if radius < 0:
        raise InputError("radius must be nonnegative")
    dist = _ball(G, radius, max_size)
    graph = nx.Graph()
    for g, d in dist.items():
        graph.add_node(g, length=d)
    gens = G.generators()
    for g in dist:
        for s in gens:
            h = G.mul(s, g)
            if h in dist and h != g:
                graph.add_edge(g, h)
    return graph


def sphere(G: GroupSpec, radius: int) -> list:
    return [g for g, d in _ball(G, radius).items() if d == radius]


# -- ends --------------------------------------------------------------------


def _annulus_components(G: GroupSpec, r_in: int, r_out: int, max_size=None) -> list:
    """Components of {r_in <= |g| <= r_out} that meet the sphere of radius r_out."""
    graph = cayley_ball(G, r_out, max_size)
    keep = [g for g, d in graph.nodes(data="length") if d >= r_in]
    sub = graph.subgraph(keep)
    return [c for c in nx.connected_components(sub) if any(graph.nodes[g]["length"] == r_out for g in c)]


@dataclass(frozen=True)
class EndsEstimate:
    count: int
    stabilized: bool
    divergent: bool
    r_in: int
    r_out: int
    previous: int

    def to_dict(self) -> dict:
        return {
            "count": self.count,
            "stabilized": self.stabilized,
            "divergent": self.divergent,
            "r_in": self.r_in,
            "r_out": self.r_out,
        }


def ends_estimate(G: GroupSpec, r_in: int, r_out: int | None = None, max_size=None) -> EndsEstimate:
    """Count unbounded-looking components outside the open ball of radius ``r_in``.

    A component counts when it reaches the sphere of radius ``r_out``
    (default ``3 r_in``). The count is compared with the one at
    ``(r_in - 1, r_out - 1)``; three or more components mean infinitely
    many ends, reported as ``divergent``.
    """
    if r_in < 2:
        raise InputError("r_in must be at least 2")
    r_out = 3 * r_in if r_out is None else r_out
    if r_out < 2 * r_in:
        raise InputError("r_out must be at least 2 r_in")
    now = len(_annulus_components(G, r_in, r_out, max_size))
    before = len(_annulus_components(G, r_in - 1, r_out - 1, max_size))
    divergent = now >= 3
    return EndsEstimate(now, now == before and not divergent, divergent, r_in, r_out, before)


# -- almost-invariant functions ----------------------------------------------


class AiFunction:
    """An integer function on ``G`` stored on the ball of radius ``radius``.

    Outside the ball it extends radially for groups with tree-like normal
    forms (Z, free groups, free products of cyclic groups): ``x(g)`` is
    the value at the last ``radius`` letters of a geodesic for ``g``. For
    other groups it takes the value ``default``.
    """

    def __init__(self, group: GroupSpec, values: Mapping, default: int = 0, radius: int | None = None):
        self.group = group
        self.default = int(default)
        vals = {}
        for g, v in values.items():
            vals[g] = int(v)
        if radius is None:
            radius = max((group.length(g) for g in vals), default=0)
        self.radius = radius
        ball = _ball(group, radius)
        for g in vals:
            if g not in ball:
                raise InputError(f"value given outside the ball of radius {radius}")
        self.values = {g: vals.get(g, self.default) for g in ball}
        self._validate()

    @classmethod
    def from_words(cls, group: GroupSpec, pairs, default: int = 0, radius=None) -> "AiFunction":
        vals = {}
        for w, v in pairs:
            vals[group.evaluate(w)] = v
        return cls(group, vals, default, radius)

    def __call__(self, g) -> int:
        v = self.values.get(g)
        if v is not None:
            return v
        if not self.group.radial:
            return self.default
        word = self.group.geodesic(g)
        return self.values[self.group.evaluate(word[len(word) - self.radius:])]

    def _validate(self):
        G = self.group
        for g in sphere(G, self.radius):
            if not G.radial and self.values[g] != self.default:
                raise InputError("values on the outer sphere must equal the default")
            for s in G.generators():
                if self(G.mul(s, g)) != self.values[g]:
                    raise InputError("function is not extendable: its boundary meets the outer sphere")

    def is_boundary_point(self, g) -> bool:
        x = self(g)
        return any(self(self.group.mul(s, g)) != x for s in self.group.generators())

    def translate(self, g) -> "callable":
        """``g x`` as a function: ``h -> x(g^-1 h)``."""
        gi = self.group.inv(g)
        return lambda h: self(self.group.mul(gi, h))

    def phi(self, g) -> "callable":
        """``(g - 1) x``."""
        gi = self.group.inv(g)
        return lambda h: self(self.group.mul(gi, h)) - self(h)

    def to_dict(self) -> dict:
        from .words import Naming, format_word

        G = self.group
        naming = Naming("factors") if isinstance(G, FreeProduct) else Naming()
        pairs = []
        for g, v in self.values.items():
            if v != self.default:
                word = G.geodesic(g) if G.radial or isinstance(G, Zk) and G.k == 1 else None
                pairs.append([format_word(word, naming) if word is not None else repr(g), v])
        return {"group": G.describe(), "default": self.default, "radius": self.radius, "values": sorted(pairs)}


def boundary_of(x: AiFunction) -> set:
    """The boundary of ``x``; it lies strictly inside the stored ball."""
    G = x.group
    reach = x.radius + 1 + max((n // 2 for n in getattr(G, "orders", ())), default=0)
    out = {g for g in _ball(G, reach) if x.is_boundary_point(g)}
    if any(G.length(g) >= x.radius for g in out):
        raise InputError("boundary reaches the outer sphere; function is not extendable")
    return out


def is_coboundary(x: AiFunction) -> bool:
    """Whether ``x`` is constant outside a finite set."""
    if not x.group.radial:
        return True
    return len({x.values[g] for g in sphere(x.group, x.radius)}) <= 1


def neighbourhood(G: GroupSpec, points, m: int, within) -> set:
    """Elements of ``within`` at left-Cayley distance at most ``m`` from ``points``."""
    pts = list(points)
    out = set()
    for h in within:
        hi = G.inv(h)
        if any(G.length(G.mul(b, hi)) <= m for b in pts):
            out.add(h)
    return out


@dataclass
class AiRank:
    rank: int
    ends: int
    representatives: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"rank": self.rank, "ends": self.ends,
                "representatives": [x.to_dict() for x in self.representatives]}


def almost_invariant_rank(G: GroupSpec, radius: int, max_size=None) -> AiRank:
    """Rank of the almost-invariant functions modulo constants and finite support.

    Representatives are indicators of the unbounded components outside the
    ball; all but one are independent. Infinite groups satisfy
    ``ends = 1 + rank``.
    """
    est = ends_estimate(G, radius, max_size=max_size)
    if not est.stabilized:
        raise UnsupportedError(f"ends estimate did not stabilize at radius {radius}")
    comps = _annulus_components(G, est.r_in, est.r_out, max_size)
    reps = []
    if len(comps) >= 2:
        for comp in comps[:-1]:
            reps.append(_indicator(G, comp, est.r_out))
        for i, x in enumerate(reps):
            assert not is_coboundary(x)
            for y in reps[i + 1:]:
                diff = AiFunction(G, {g: x.values[g] - y.values[g] for g in x.values}, 0, x.radius)
                assert not is_coboundary(diff)
    return AiRank(max(len(comps) - 1, 0), est.count, reps)


def _indicator(G: GroupSpec, comp, r_out: int) -> AiFunction:
    return AiFunction(G, {g: 1 for g in comp}, 0, r_out)


# -- coset ends --------------------------------------------------------------


def _coset_keys(G: GroupSpec, H: list, elements, reach: int):
    """Map each element to a label of its right coset ``H g``.

    Exact for free groups (via the Stallings graph of ``H``); otherwise the
    cosets are approximated by connectivity under left multiplication by
    the generators of ``H`` inside the ball of radius ``reach``.
    """
    if isinstance(G, FreeGroup):
        core = fold_core_graph([tuple(w) for w in H], G.rank)
        table = {}
        for u, l, v in core.edges:
            table[(u, l)] = v
            table[(v, -l)] = u
        keys = {}
        for g in elements:
            v, i = core.basepoint, 0
            while i < len(g) and (v, g[i]) in table:
                v = table[(v, g[i])]
                i += 1
            keys[g] = (v, g[i:])
        return keys
    hs = [G.evaluate(w) for w in H]
    hs += [G.inv(h) for h in hs]
    ball = _ball(G, reach)
    graph = nx.Graph()
    graph.add_nodes_from(ball)
    for g in ball:
        for h in hs:
            k = G.mul(h, g)
            if k in ball:
                graph.add_edge(g, k)
    labels = {}
    for i, comp in enumerate(nx.connected_components(graph)):
        for g in comp:
            labels[g] = i
    return {g: labels[g] for g in elements}


@dataclass
class SwarupReport:
    holds: bool
    cosets_checked: int
    witness: object = None

    def __bool__(self):
        return self.holds

    def to_dict(self) -> dict:
        return {"holds": self.holds, "cosets_checked": self.cosets_checked,
                "witness": None if self.witness is None else repr(self.witness)}


def swarup_kernel_test(x: AiFunction, H_gens, radius: int) -> SwarupReport:
    """Whether ``x`` is constant on the ends of every coset ``H g`` meeting the ball.

    With ``m`` the longest generator of ``H``, ``x`` is constant on each
    piece of ``H g`` away from the ``m``-neighbourhood of its boundary
    (pieces are joined by left multiplication by generators of ``H``).
    Pieces reaching the sphere of radius ``radius`` stand in for the
    unbounded ones, and all of those must carry one value.
    """
    G = x.group
    H = [tuple(w) for w in H_gens]
    if not H:
        return SwarupReport(True, 0)
    hs = [G.evaluate(w) for w in H]
    m = max(G.length(h) for h in hs)
    bd = boundary_of(x)
    if bd and max(G.length(b) for b in bd) + m >= radius:
        raise InputError(f"radius {radius} too small to contain the {m}-neighbourhood of the boundary")
    ball = _ball(G, radius)
    near = neighbourhood(G, bd, m, ball)
    keys = _coset_keys(G, H, ball, radius + 2 * m)
    cosets = {}
    for g in ball:
        cosets.setdefault(keys[g], []).append(g)
    steps = hs + [G.inv(h) for h in hs]
    for key, members in sorted(cosets.items(), key=lambda kv: repr(kv[0])):
        far = set(members) - near
        values = set()
        seen = set()
        for start in far:
            if start in seen:
                continue
            piece = [start]
            seen.add(start)
            stack = [start]
            while stack:
                g = stack.pop()
                for h in steps:
                    k = G.mul(h, g)
                    if k in far and k not in seen:
                        seen.add(k)
                        piece.append(k)
                        stack.append(k)
            if any(ball[g] == radius for g in piece):
                values.add(x(start))
        if len(values) > 1:
            return SwarupReport(False, len(cosets), key)
    return SwarupReport(True, len(cosets))
