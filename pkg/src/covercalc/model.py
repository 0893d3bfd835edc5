"""Infinite-type surfaces as locally finite graphs of finite-type pieces.

Every vertex of a :class:`PieceGraph` carries a finite-type piece whose
boundary circles are glued to the neighbouring pieces, one circle per edge
slot. Ends of the surface are read off from truncations: the complement of
a ball of pieces splits into components, and each component that reaches
far enough out is treated as a neighbourhood of a family of ends.
"""

from __future__ import annotations

import math
import threading
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterator

import networkx as nx

from . import config
from .errors import InputError, ResourceError
from .surfaces import FiniteSurface

INF = math.inf


# -- end spaces --------------------------------------------------------------


@dataclass(frozen=True)
class EndSpec:
    """A genus-marked end space from the tame class.

    ``tag`` is one of ``Empty``, ``FinitePlanar``, ``FiniteMixed``,
    ``OmegaPlusOnePlanar``, ``OmegaPlusOneGenusLimit``, ``CantorPlanar``,
    ``CantorAllGenus``. ``planar``/``genus`` count isolated ends for the
    finite tags.
    """

    tag: str
    planar: int = 0
    genus: int = 0

    TAGS = (
        "Empty",
        "FinitePlanar",
        "FiniteMixed",
        "OmegaPlusOnePlanar",
        "OmegaPlusOneGenusLimit",
        "CantorPlanar",
        "CantorAllGenus",
    )

    def __post_init__(self):
        if self.tag not in self.TAGS:
            raise InputError(f"unknown end-space tag {self.tag!r}")
        if self.tag == "FinitePlanar" and (self.planar < 1 or self.genus):
            raise InputError("FinitePlanar needs k >= 1 planar ends")
        if self.tag == "FiniteMixed" and (self.genus < 1 or self.planar < 0):
            raise InputError("FiniteMixed needs at least one genus end; use FinitePlanar otherwise")

    @classmethod
    def finite(cls, planar: int, genus: int = 0) -> "EndSpec":
        if planar == genus == 0:
            return cls("Empty")
        if genus == 0:
            return cls("FinitePlanar", planar)
        return cls("FiniteMixed", planar, genus)

    @property
    def is_finite(self) -> bool:
        return self.tag in ("Empty", "FinitePlanar", "FiniteMixed")

    @property
    def has_isolated_planar(self) -> bool:
        return self.planar > 0 or self.tag.startswith("OmegaPlusOne")

    @property
    def has_genus_ends(self) -> bool:
        return self.genus > 0 or self.tag in ("OmegaPlusOneGenusLimit", "CantorAllGenus")

    def to_dict(self) -> dict:
        out = {"tag": self.tag}
        if self.is_finite and self.tag != "Empty":
            out.update(planar=self.planar, genus=self.genus)
        return out

    def __str__(self):
        if self.tag == "FinitePlanar":
            return f"FinitePlanar({self.planar})"
        if self.tag == "FiniteMixed":
            return f"FiniteMixed({self.planar},{self.genus})"
        return self.tag


@dataclass(frozen=True)
class Unrecognized:
    """Returned instead of a classification the truncation cannot certify."""

    reason: str
    genus: object = None
    spec: object = None

    def to_dict(self) -> dict:
        return {
            "unrecognized": self.reason,
            "genus": _genus_json(self.genus),
            "spec": self.spec.to_dict() if isinstance(self.spec, EndSpec) else None,
        }


class Named(Enum):
    PLANE = "plane"
    SPHERE = "sphere"
    ANNULUS = "annulus"
    TORUS = "torus"
    FLUTE = "flute"
    LOCH_NESS = "lnm"
    SPOTTED_LOCH_NESS = "slnm"
    CANTOR_TREE = "cantor"
    BLOOMING_CANTOR_TREE = "bct"

    @property
    def is_infinite_type(self) -> bool:
        return self in _INFINITE_NAMED

    def to_dict(self) -> dict:
        return {"named": self.value}


_INFINITE_NAMED = {
    Named.FLUTE,
    Named.LOCH_NESS,
    Named.SPOTTED_LOCH_NESS,
    Named.CANTOR_TREE,
    Named.BLOOMING_CANTOR_TREE,
}

# (genus class, end space) of each named infinite-type surface
NAMED_TYPES = {
    Named.FLUTE: (0, EndSpec("OmegaPlusOnePlanar")),
    Named.LOCH_NESS: (INF, EndSpec.finite(0, 1)),
    Named.SPOTTED_LOCH_NESS: (INF, EndSpec("OmegaPlusOneGenusLimit")),
    Named.CANTOR_TREE: (0, EndSpec("CantorPlanar")),
    Named.BLOOMING_CANTOR_TREE: (INF, EndSpec("CantorAllGenus")),
    Named.PLANE: (0, EndSpec.finite(1)),
    Named.ANNULUS: (0, EndSpec.finite(2)),
    Named.SPHERE: (0, EndSpec("Empty")),
    Named.TORUS: (1, EndSpec("Empty")),
}


def named_from_type(genus, spec: EndSpec):
    """Look up (genus, end space) in the table of named surfaces.

    Finite genus with finitely many planar ends gives the finite-type
    surface (as a :class:`FiniteSurface` unless it has a name).
    """
    for name, key in NAMED_TYPES.items():
        if key == (genus, spec):
            return name
    if genus != INF and spec.tag in ("Empty", "FinitePlanar"):
        return FiniteSurface(int(genus), 0, spec.planar)
    return Unrecognized("no named surface with this genus and end space", genus, spec)


def type_of(surface) -> tuple:
    """(genus class, end space) of a named surface or finite-type surface.

    Boundary circles are read as punctures (the interior is meant).
    """
    if isinstance(surface, Named):
        return NAMED_TYPES[surface]
    if isinstance(surface, FiniteSurface):
        return surface.g, EndSpec.finite(surface.b + surface.p)
    raise InputError(f"cannot read a surface type from {surface!r}")


def _genus_json(g):
    if g is None:
        return None
    return "inf" if g == INF else int(g)


def surface_json(x) -> dict:
    if isinstance(x, FiniteSurface):
        return {"finite": x.to_dict()}
    return x.to_dict()


# -- piece graphs ------------------------------------------------------------


class PieceGraph:
    """Lazy, locally finite graph of finite-type pieces.

    Subclasses provide ``root``, ``degree``, ``neighbor``, ``reverse_slot``
    and ``depth`` (graph distance to the root), plus the per-vertex piece
    data. ``piece(v)`` always has one boundary circle per edge slot.
    """

    is_tree = False
    is_finite = False
    may_have_punctures = False
    root = None

    def __init__(self):
        self._balls = {}
        self._lock = threading.Lock()

    # structure
    def degree(self, v) -> int:
        raise NotImplementedError

    def neighbor(self, v, slot):
        raise NotImplementedError

    def reverse_slot(self, v, slot) -> int:
        """Slot at ``neighbor(v, slot)`` whose edge leads back to ``v``."""
        raise NotImplementedError

    def depth(self, v) -> int:
        raise NotImplementedError

    def neighbors(self, v) -> list:
        return [self.neighbor(v, s) for s in range(self.degree(v))]

    def children(self, v) -> list:
        d = self.depth(v) + 1
        return [u for u in self.neighbors(v) if self.depth(u) == d]

    # pieces
    def piece_genus(self, v) -> int:
        return 0

    def punctures(self, v) -> int:
        return 0

    def piece(self, v) -> FiniteSurface:
        return FiniteSurface(self.piece_genus(v), self.degree(v), self.punctures(v))

    def deleted_rays(self, v) -> tuple:
        """Boundary slots of ``v`` removed together with a proper ray."""
        return ()

    # truncations
    def ball(self, radius: int, max_size=None) -> tuple:
        """Vertices at distance <= ``radius`` from the root, BFS order."""
        bound = config.max_ball(max_size)
        with self._lock:
            hit = self._balls.get(radius)
        if hit is not None:
            if len(hit) > bound:
                raise ResourceError(f"ball of radius {radius} exceeds {bound} vertices")
            return hit
        seen = {self.root}
        order = [self.root]
        queue = deque([self.root])
        while queue:
            v = queue.popleft()
            if self.depth(v) >= radius:
                continue
            for u in self.neighbors(v):
                if u not in seen and self.depth(u) <= radius:
                    seen.add(u)
                    order.append(u)
                    if len(order) > bound:
                        raise ResourceError(f"ball of radius {radius} exceeds {bound} vertices")
                    queue.append(u)
        out = tuple(order)
        with self._lock:
            self._balls[radius] = out
        return out

    def subgraph(self, vertices) -> nx.Graph:
        """Simple graph induced on ``vertices`` (parallel edges collapse)."""
        vs = set(vertices)
        g = nx.Graph()
        g.add_nodes_from(vs)
        for v in vs:
            for u in self.neighbors(v):
                if u in vs:
                    g.add_edge(v, u)
        return g

    def to_dot(self, radius: int, highlight=()) -> str:
        verts = self.ball(radius)
        ids = {v: i for i, v in enumerate(verts)}
        hl = set(highlight)
        lines = ["graph pieces {"]
        for v in verts:
            pc = self.piece(v)
            label = f"{_vertex_label(v)}\\ng={pc.g} b={pc.b} p={pc.p}"
            style = ', style=filled, fillcolor="lightblue"' if v in hl else ""
            lines.append(f'  {ids[v]} [label="{label}"{style}];')
        for v in verts:
            for s in range(self.degree(v)):
                u = self.neighbor(v, s)
                if u in ids and (ids[v], s) < (ids[u], self.reverse_slot(v, s)):
                    lines.append(f"  {ids[v]} -- {ids[u]};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def describe(self) -> dict:
        return {"generator": type(self).__name__}


def _vertex_label(v) -> str:
    if isinstance(v, tuple):
        return "(" + ",".join(map(str, v)) + ")" if v else "root"
    return str(v)


def _cycle_rank(G: PieceGraph, vertices) -> int:
    vs = set(vertices)
    if not vs:
        return 0
    edges = 0
    for v in vs:
        for s in range(G.degree(v)):
            if G.neighbor(v, s) in vs:
                edges += 1
    edges //= 2
    comps = _count_components(G, vs)
    return edges - len(vs) + comps


def _count_components(G: PieceGraph, vs: set) -> int:
    seen = set()
    n = 0
    for v in vs:
        if v in seen:
            continue
        n += 1
        stack = [v]
        seen.add(v)
        while stack:
            x = stack.pop()
            for u in G.neighbors(x):
                if u in vs and u not in seen:
                    seen.add(u)
                    stack.append(u)
    return n


class CayleyZk(PieceGraph):
    """Cayley graph of Z^k; slot ``2i`` is ``+e_i``, slot ``2i+1`` is ``-e_i``."""

    def __init__(self, k: int, piece_genus: int = 1, puncture_at: Callable | None = None):
        super().__init__()
        if k < 1:
            raise InputError("Z^k needs k >= 1")
        self.k = k
        self._genus = piece_genus
        self._puncture_at = puncture_at
        self.may_have_punctures = puncture_at is not None
        self.root = (0,) * k

    def degree(self, v):
        return 2 * self.k

    def neighbor(self, v, slot):
        i, sign = divmod(slot, 2)
        w = list(v)
        w[i] += -1 if sign else 1
        return tuple(w)

    def reverse_slot(self, v, slot):
        return slot ^ 1

    def depth(self, v):
        return sum(abs(x) for x in v)

    def piece_genus(self, v):
        return self._genus

    def punctures(self, v):
        return self._puncture_at(v) if self._puncture_at else 0

    def describe(self):
        return {"generator": "CayleyZk", "k": self.k, "piece_genus": self._genus,
                "punctured": self.may_have_punctures}


class RegularTree(PieceGraph):
    """The ``valence``-regular tree; vertices are non-backtracking slot words.

    ``pairing`` is an involution on slots: crossing an edge through slot
    ``s`` arrives through slot ``pairing[s]``. Even valence defaults to
    ``(0 1)(2 3)...`` (a free-group Cayley tree), odd valence to the
    identity (a free product of copies of Z/2).
    """

    is_tree = True

    def __init__(self, valence: int, piece_genus: int = 0, pairing=None):
        super().__init__()
        if valence < 2:
            raise InputError("tree valence must be at least 2")
        self.valence = valence
        self._genus = piece_genus
        if pairing is None:
            pairing = [s ^ 1 for s in range(valence)] if valence % 2 == 0 else list(range(valence))
        self.pairing = tuple(pairing)
        self.root = ()

    def degree(self, v):
        return self.valence

    def neighbor(self, v, slot):
        if v and slot == self.pairing[v[-1]]:
            return v[:-1]
        return v + (slot,)

    def reverse_slot(self, v, slot):
        return self.pairing[slot]

    def depth(self, v):
        return len(v)

    def piece_genus(self, v):
        return self._genus

    def describe(self):
        return {"generator": "RegularTree", "valence": self.valence, "piece_genus": self._genus}


class Ray(PieceGraph):
    """A one-ended half-line of pieces; vertex ``n >= 0``.

    The root has a single slot (toward 1); every other vertex has slot 0
    toward ``n-1`` and slot 1 toward ``n+1``.
    """

    is_tree = True

    def __init__(self, piece_genus: int = 0, puncture_at: Callable | None = None):
        super().__init__()
        self._genus = piece_genus
        self._puncture_at = puncture_at
        self.may_have_punctures = puncture_at is not None
        self.root = 0

    def degree(self, v):
        return 1 if v == 0 else 2

    def neighbor(self, v, slot):
        if v == 0 or slot == 1:
            return v + 1
        return v - 1

    def reverse_slot(self, v, slot):
        u = self.neighbor(v, slot)
        if u > v:
            return 0
        return 0 if u == 0 else 1

    def depth(self, v):
        return v

    def piece_genus(self, v):
        return self._genus

    def punctures(self, v):
        return self._puncture_at(v) if self._puncture_at else 0

    def describe(self):
        return {"generator": "Ray", "piece_genus": self._genus, "punctured": self.may_have_punctures}


class FiniteGraph(PieceGraph):
    """An explicit finite graph.

    ``adjacency[v]`` lists neighbours in slot order (repeat for multi-edges,
    list ``v`` twice for a loop); ``pieces[v]`` is ``(genus, punctures)``.
    """

    is_finite = True

    def __init__(self, adjacency: dict, pieces: dict | None = None, root=None):
        super().__init__()
        self.adj = {v: tuple(ns) for v, ns in adjacency.items()}
        self.pieces = dict(pieces or {})
        self.root = root if root is not None else next(iter(self.adj))
        self.may_have_punctures = any(p for _, p in self.pieces.values())
        self._rev = {}
        used = set()
        for v, ns in self.adj.items():
            for s, u in enumerate(ns):
                if (v, s) in self._rev:
                    continue
                for t, w in enumerate(self.adj[u]):
                    if w == v and (u, t) not in used and (u, t) != (v, s):
                        self._rev[(v, s)] = t
                        self._rev[(u, t)] = s
                        used.update({(u, t), (v, s)})
                        break
                else:
                    raise InputError(f"edge {v}->{u} has no matching reverse edge")
        self._depth = {self.root: 0}
        queue = deque([self.root])
        while queue:
            v = queue.popleft()
            for u in self.adj[v]:
                if u not in self._depth:
                    self._depth[u] = self._depth[v] + 1
                    queue.append(u)
        if len(self._depth) != len(self.adj):
            raise InputError("piece graph must be connected")

    def degree(self, v):
        return len(self.adj[v])

    def neighbor(self, v, slot):
        return self.adj[v][slot]

    def reverse_slot(self, v, slot):
        return self._rev[(v, slot)]

    def depth(self, v):
        return self._depth[v]

    def piece_genus(self, v):
        return self.pieces.get(v, (0, 0))[0]

    def punctures(self, v):
        return self.pieces.get(v, (0, 0))[1]

    def total_genus(self) -> int:
        return sum(self.piece_genus(v) for v in self.adj) + _cycle_rank(self, self.adj)

    def describe(self):
        return {"generator": "Finite", "vertices": len(self.adj)}


# -- builders ----------------------------------------------------------------


def _axis_ray(v) -> int:
    return 1 if v[0] >= 0 and not any(v[1:]) else 0


def _everywhere(v) -> int:
    return 1


def build_named(name: Named) -> PieceGraph:
    """Piece-graph model of a named infinite-type surface."""
    if not isinstance(name, Named):
        name = Named(name)
    if name is Named.LOCH_NESS:
        return CayleyZk(2, piece_genus=1)
    if name is Named.BLOOMING_CANTOR_TREE:
        return RegularTree(4, piece_genus=1)
    if name is Named.FLUTE:
        return Ray(piece_genus=0, puncture_at=_everywhere)
    if name is Named.SPOTTED_LOCH_NESS:
        return CayleyZk(2, piece_genus=1, puncture_at=_axis_ray)
    if name is Named.CANTOR_TREE:
        return RegularTree(3, piece_genus=0)
    raise InputError(f"{name.value} is finite type; use FiniteSurface directly")


# -- truncated end analysis --------------------------------------------------


class _Component:
    """One component of ball(r_out) minus ball(r)."""

    def __init__(self, G: PieceGraph, r: int, r_out: int, seed=None, vertices=None):
        self.G, self.r, self.r_out = G, r, r_out
        self.seed = seed
        self.vertices = vertices

    def iter_vertices(self, lo: int, hi: int) -> Iterator:
        """Vertices of the component with lo < depth <= hi."""
        G = self.G
        if self.vertices is not None:
            for v in self.vertices:
                if lo < G.depth(v) <= hi:
                    yield v
            return
        stack = [self.seed]
        while stack:
            v = stack.pop()
            d = G.depth(v)
            if d > lo:
                yield v
            if d < hi:
                stack.extend(G.children(v))

    def genus_in(self, lo: int, hi: int) -> int:
        G = self.G
        total = 0
        verts = []
        for v in self.iter_vertices(lo, hi):
            g = G.piece_genus(v)
            if g and G.is_tree:
                return g
            total += g
            verts.append(v)
        if G.is_tree:
            return 0
        return total + _cycle_rank(G, verts)

    def has_punctures_in(self, lo: int, hi: int) -> bool:
        if not self.G.may_have_punctures:
            return False
        return any(self.G.punctures(v) for v in self.iter_vertices(lo, hi))

    def punctures_in(self, lo: int, hi: int) -> int:
        if not self.G.may_have_punctures:
            return 0
        return sum(self.G.punctures(v) for v in self.iter_vertices(lo, hi))

    def split_count(self, level: int, stop: int = 2) -> int:
        """Number of sub-components beyond ``level`` that still reach r_out."""
        G = self.G
        if self.vertices is None:
            n = 0
            for v in self.iter_vertices(level, level + 1):
                if _reaches(G, v, self.r_out):
                    n += 1
                    if n >= stop:
                        break
            return n
        deep = {v for v in self.vertices if G.depth(v) > level}
        sub = G.subgraph(deep)
        return sum(1 for c in nx.connected_components(sub) if max(G.depth(v) for v in c) == self.r_out)


def _reaches(G: PieceGraph, v, depth: int) -> bool:
    stack = [v]
    while stack:
        x = stack.pop()
        if G.depth(x) >= depth:
            return True
        stack.extend(G.children(x))
    return False


def _components(G: PieceGraph, r: int, r_out: int) -> list:
    """Components of ball(r_out) minus ball(r) that meet sphere(r_out)."""
    if G.is_tree:
        seeds = [v for v in G.ball(r + 1) if G.depth(v) == r + 1]
        return [_Component(G, r, r_out, seed=s) for s in seeds if _reaches(G, s, r_out)]
    annulus = [v for v in G.ball(r_out) if G.depth(v) > r]
    sub = G.subgraph(annulus)
    out = []
    for c in nx.connected_components(sub):
        if max(G.depth(v) for v in c) == r_out:
            out.append(_Component(G, r, r_out, vertices=frozenset(c)))
    return out


@dataclass(frozen=True)
class Census:
    """Counts of end families seen at one truncation radius."""

    radius: int
    components: int
    isolated_planar: int
    isolated_genus: int
    limit_planar: int
    limit_genus: int
    punctures: int

    @property
    def limits(self) -> int:
        return self.limit_planar + self.limit_genus

    @property
    def isolated(self) -> int:
        return self.isolated_planar + self.isolated_genus + self.punctures


def census(G: PieceGraph, radius: int) -> Census:
    """Classify each complementary component of ball(radius).

    A component is genus-marked when both annuli (R, 2R] and (2R, 3R] it
    meets carry genus; it is a limit when it splits again beyond 2R or
    carries punctures there, and isolated otherwise.
    """
    r, r_out = radius, 3 * radius
    if G.is_finite:
        verts = G.ball(10**9)
        return Census(radius, 0, 0, 0, 0, 0, sum(G.punctures(v) for v in verts))
    punct = sum(G.punctures(v) for v in G.ball(r)) if G.may_have_punctures else 0
    counts = dict(ip=0, ig=0, lp=0, lg=0)
    comps = _components(G, r, r_out)
    for c in comps:
        marked = c.genus_in(r, 2 * r) > 0 and c.genus_in(2 * r, r_out) > 0
        limit = c.has_punctures_in(2 * r, r_out) or c.split_count(2 * r) >= 2
        if not limit:
            punct += c.punctures_in(r, 2 * r)
        key = ("l" if limit else "i") + ("g" if marked else "p")
        counts[key] += 1
    return Census(radius, len(comps), counts["ip"], counts["ig"], counts["lp"], counts["lg"], punct)


def _pattern(c: Census):
    if c.limits == 0:
        return EndSpec.finite(c.isolated_planar + c.punctures, c.isolated_genus)
    if c.limits == 1 and c.isolated_genus == 0:
        return EndSpec("OmegaPlusOneGenusLimit" if c.limit_genus else "OmegaPlusOnePlanar")
    if c.limits >= 2 and c.isolated == 0:
        if c.limit_planar == 0:
            return EndSpec("CantorAllGenus")
        if c.limit_genus == 0:
            return EndSpec("CantorPlanar")
    return None


@dataclass(frozen=True)
class EndReport:
    spec: object  # EndSpec or Unrecognized
    stabilized: bool
    censuses: tuple = field(default=(), compare=False)

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.to_dict(),
            "stabilized": self.stabilized,
            "census": [c.__dict__ for c in self.censuses],
        }


def end_spec_of(G: PieceGraph, radius: int) -> EndReport:
    """Genus-marked end space read from truncations at ``radius`` and ``radius + 1``."""
    if radius < 1:
        raise InputError("radius must be at least 1")
    a, b = census(G, radius), census(G, radius + 1)
    pa, pb = _pattern(a), _pattern(b)
    if pa is None or pb is None:
        return EndReport(Unrecognized("counts match no tame pattern"), False, (a, b))
    if pa != pb:
        return EndReport(Unrecognized(f"pattern changed: {pa} then {pb}", spec=pb), False, (a, b))
    if pa.tag.startswith("OmegaPlusOne") and not b.isolated > a.isolated:
        return EndReport(Unrecognized("isolated ends did not accumulate", spec=pa), False, (a, b))
    if pa.tag.startswith("Cantor") and not b.limits > a.limits:
        return EndReport(Unrecognized("limit components did not multiply", spec=pa), False, (a, b))
    return EndReport(pa, True, (a, b))


def genus_lower_bound(G: PieceGraph, radius: int) -> int:
    """Genus visible in ball(radius): piece genera plus the cycle rank."""
    if radius < 1:
        raise InputError("radius must be at least 1")
    verts = G.ball(radius)
    total = sum(G.piece_genus(v) for v in verts)
    if not G.is_tree:
        total += _cycle_rank(G, verts)
    return total


def genus_class(G: PieceGraph, radius: int):
    """Exact genus for finite graphs; otherwise ``inf`` if the bound grows."""
    if G.is_finite:
        return G.total_genus()
    lo, hi = genus_lower_bound(G, radius), genus_lower_bound(G, radius + 1)
    return INF if hi > lo else lo


RADIUS_SCHEDULE = (3, 4)


def classify_named(G: PieceGraph, radius: int | None = None):
    """Named surface (or finite-type surface) modelled by ``G``.

    With no radius the schedule 3, 4 is tried in order (each comparison
    uses the next radius as well).
    """
    radii = (radius,) if radius is not None else RADIUS_SCHEDULE
    report = None
    for r in radii:
        report = end_spec_of(G, r)
        if report.stabilized:
            return named_from_type(genus_class(G, r), report.spec)
    return Unrecognized(f"end space not stabilized: {report.spec.reason}", spec=report.spec.spec)
