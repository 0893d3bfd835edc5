"""Free products of cyclic groups acting on their Bass-Serre trees.

The tree used here is the barycentric form of the usual one: a vertex
``("e", g)`` for every group element and a vertex ``("v", i, r)`` for
every coset ``r A_i`` of a factor, with ``g`` joined to ``g A_i``. All
distances in this tree are twice the distances in the standard tree
(vertices the factor cosets, one edge per group element), so translation
lengths are halved displacements.
"""

from __future__ import annotations

from dataclasses import dataclass

import networkx as nx

from . import config
from .ends import FreeProduct
from .errors import InputError, ResourceError
from .words import Naming, format_word


@dataclass(frozen=True)
class Elliptic:
    vertex: tuple
    conjugator: tuple  # syllables u with w = u c u^-1, c in one factor

    kind = "elliptic"
    translation_length = 0

    def to_dict(self) -> dict:
        return {"type": "elliptic", "vertex": _vertex_json(self.vertex), "translation_length": 0}


@dataclass(frozen=True)
class Hyperbolic:
    translation_length: int

    kind = "hyperbolic"

    def to_dict(self) -> dict:
        return {"type": "hyperbolic", "translation_length": self.translation_length}


@dataclass(frozen=True)
class CommonFixedVertex:
    vertex: tuple

    def to_dict(self) -> dict:
        return {"result": "common_fixed_vertex", "vertex": _vertex_json(self.vertex)}


@dataclass(frozen=True)
class HypothesisFails:
    witness: tuple  # indices into gens: (i,) or (i, j)
    word: tuple

    def to_dict(self) -> dict:
        return {"result": "hypothesis_fails", "witness": list(self.witness)}


@dataclass(frozen=True)
class NoCommonPoint:
    report: str

    def to_dict(self) -> dict:
        return {"result": "no_common_point", "report": self.report}


def _vertex_json(v) -> dict:
    if v[0] == "e":
        return {"element": [list(s) for s in v[1]]}
    return {"factor": v[1], "coset_rep": [list(s) for s in v[2]]}


class FreeProductAction:
    """The action of ``A_1 * ... * A_n`` (cyclic factors) on its Bass-Serre tree."""

    def __init__(self, orders):
        orders = tuple(orders)
        if len(orders) < 2:
            raise InputError("a free product needs at least two factors")
        self.group = FreeProduct(orders)
        self.orders = orders
        self.naming = Naming("factors")

    # -- group level
    def normal_form(self, word) -> tuple:
        """Alternating syllables ``(factor, exponent)``; empty for the identity."""
        return self.group.evaluate(word)

    def format(self, syllables) -> str:
        return format_word(self._letters(syllables), self.naming)

    def _letters(self, syllables) -> tuple:
        out = []
        for f, e in syllables:
            out += [f + 1] * e if e > 0 else [-(f + 1)] * (-e)
        return tuple(out)

    def cyclic_reduction(self, g) -> tuple:
        """``(u, c)`` with ``g = u c u^-1`` and ``c`` cyclically reduced."""
        G = self.group
        u = ()
        c = tuple(g)
        while len(c) >= 2 and c[0][0] == c[-1][0]:
            last = (c[-1],)
            u = G.mul(u, G.inv(last))
            c = G.mul(G.mul(last, c), G.inv(last))
        return u, c

    # -- tree level
    def coset_rep(self, g, i: int) -> tuple:
        if g and g[-1][0] == i:
            return g[:-1]
        return g

    def act(self, g, v) -> tuple:
        G = self.group
        if v[0] == "e":
            return ("e", G.mul(g, v[1]))
        return ("v", v[1], self.coset_rep(G.mul(g, v[2]), v[1]))

    def distance(self, u, v) -> int:
        """Exact distance in the (barycentric) tree."""
        G = self.group
        if u[0] == "e" and v[0] == "v":
            u, v = v, u
        if u[0] == "e":
            return 2 * len(G.mul(G.inv(u[1]), v[1]))
        i, r = u[1], u[2]
        core = G.mul(G.inv(r), v[1] if v[0] == "e" else v[2])
        if core and core[0][0] == i:
            core = core[1:]
        if v[0] == "e":
            return 1 + 2 * len(core)
        j = v[1]
        if not core and i == j:
            return 0
        if core and core[-1][0] == j:
            core = core[:-1]
        return 2 + 2 * len(core)

    def classify_isometry(self, word):
        g = self.normal_form(word)
        u, c = self.cyclic_reduction(g)
        if len(c) <= 1:
            f = c[0][0] if c else 0
            return Elliptic(("v", f, self.coset_rep(u, f)), u)
        return Hyperbolic(len(c))

    def ball(self, radius: int, max_size=None) -> list:
        """Element vertices of word length <= radius plus their coset neighbours."""
        G = self.group
        bound = config.max_ball(max_size)
        from .ends import _ball

        elems = sorted(_ball(G, radius, bound), key=lambda g: (G.length(g), g))
        out = []
        seen = set()
        for g in elems:
            for v in [("e", g)] + [("v", i, self.coset_rep(g, i)) for i in range(len(self.orders))]:
                if v not in seen:
                    seen.add(v)
                    out.append(v)
                    if len(out) > bound:
                        raise ResourceError(f"tree ball exceeds {bound} vertices")
        return out

    def ball_graph(self, radius: int) -> nx.Graph:
        graph = nx.Graph()
        for v in self.ball(radius):
            graph.add_node(v)
            if v[0] == "e":
                for i in range(len(self.orders)):
                    graph.add_edge(v, ("v", i, self.coset_rep(v[1], i)))
        return graph

    def min_displacement(self, word, radius: int) -> int:
        g = self.normal_form(word)
        return min(self.distance(v, self.act(g, v)) for v in self.ball(radius))

    def fixed_subtree(self, word, radius: int):
        """``(vertices fixed by word in ball(radius), hyperbolic flag)``."""
        g = self.normal_form(word)
        if isinstance(self.classify_isometry(word), Hyperbolic):
            return frozenset(), True
        return frozenset(v for v in self.ball(radius) if self.act(g, v) == v), False

    def serre_criterion(self, gens):
        """Common fixed vertex of ``gens`` when each ``a_i`` and ``a_i a_j`` is elliptic."""
        if not gens:
            raise InputError("need at least one generator")
        words = [tuple(w) for w in gens]
        kinds = [self.classify_isometry(w) for w in words]
        for i, k in enumerate(kinds):
            if isinstance(k, Hyperbolic):
                return HypothesisFails((i,), words[i])
        for i in range(len(words)):
            for j in range(i + 1, len(words)):
                w = words[i] + words[j]
                if isinstance(self.classify_isometry(w), Hyperbolic):
                    return HypothesisFails((i, j), w)
        elems = [self.normal_form(w) for w in words]
        fixed = [k.vertex for k, g in zip(kinds, elems) if g]
        if not fixed:
            return CommonFixedVertex(("e", ()))
        # trivial edge stabilizers: a nontrivial elliptic element fixes one vertex
        candidates = set(fixed)
        if len(candidates) != 1:
            return NoCommonPoint(f"fixed vertices {sorted(candidates, key=repr)} differ")
        v = fixed[0]
        if not all(self.act(g, v) == v for g in elems):
            return NoCommonPoint("witness vertex is not fixed by every generator")
        return CommonFixedVertex(v)

    def to_dot(self, radius: int, word=None) -> str:
        graph = self.ball_graph(radius)
        fixed = set()
        if word is not None:
            fixed, _ = self.fixed_subtree(word, radius)
        ids = {v: i for i, v in enumerate(sorted(graph.nodes, key=repr))}
        lines = ["graph bass_serre {"]
        for v, i in ids.items():
            if v[0] == "e":
                label, shape = self.format(v[1]), "point"
            else:
                label = f"{self.format(v[2])} {self.naming.name(v[1] + 1)}"
                shape = "ellipse"
            extra = ', style=filled, fillcolor="gold"' if v in fixed else ""
            lines.append(f'  {i} [label="{label}", shape={shape}{extra}];')
        for u, v in sorted(graph.edges, key=repr):
            lines.append(f"  {ids[u]} -- {ids[v]};")
        lines.append("}")
        return "\n".join(lines) + "\n"
