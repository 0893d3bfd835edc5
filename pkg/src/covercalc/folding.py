"""Stallings core graphs of finitely generated subgroups of free groups."""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .errors import InputError
from .words import invert, max_letter, multiply, reduce_word


@dataclass(frozen=True)
class CoreGraph:
    """A folded, trimmed, labelled graph with a basepoint.

    Vertices are ``0..n_vertices-1`` numbered by BFS from the basepoint
    (vertex 0), so two graphs of the same subgroup compare equal.
    ``edges`` holds ``(source, label, target)`` with ``label >= 1``.
    """

    n_vertices: int
    edges: tuple
    ambient_rank: int
    free_basis: tuple = field(compare=False)
    basepoint: int = 0

    @property
    def rank(self) -> int:
        return len(self.edges) - self.n_vertices + 1

    @property
    def is_regular(self) -> bool:
        """Every vertex has one outgoing and one incoming edge per generator."""
        out = {(u, l) for u, l, _ in self.edges}
        inc = {(v, l) for _, l, v in self.edges}
        want = self.n_vertices * self.ambient_rank
        return len(out) == want and len(inc) == want

    @property
    def index(self):
        """Index of the subgroup: vertex count if finite, ``math.inf`` otherwise."""
        return self.n_vertices if self.is_regular else math.inf

    def _transitions(self):
        table = {}
        for u, l, v in self.edges:
            table[(u, l)] = v
            table[(v, -l)] = u
        return table

    def read(self, w: Sequence[int]):
        """Endpoint of the path reading ``w`` from the basepoint, or None."""
        table = self._transitions()
        v = self.basepoint
        for x in w:
            v = table.get((v, x))
            if v is None:
                return None
        return v

    def contains(self, w: Sequence[int]) -> bool:
        """Membership of the reduced word ``w`` in the subgroup."""
        return self.read(reduce_word(w)) == self.basepoint

    def is_folded(self) -> bool:
        seen = set()
        for u, l, v in self.edges:
            for key in ((u, l), (v, -l)):
                if key in seen:
                    return False
                seen.add(key)
        return True

    def to_dict(self, naming=None) -> dict:
        from .words import format_word

        return {
            "vertices": self.n_vertices,
            "edges": [list(e) for e in self.edges],
            "rank": self.rank,
            "index": None if self.index == math.inf else self.index,
            "free_basis": [format_word(w, naming) for w in self.free_basis],
        }

    def to_dot(self, naming=None) -> str:
        from .words import format_word

        lines = ["digraph core {", '  0 [shape=doublecircle];']
        for u, l, v in self.edges:
            label = format_word((l,), naming)
            lines.append(f'  {u} -> {v} [label="{label}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        parent[x], x = root, parent[x]
    return root


def _fold(edges: set, parent: dict) -> set:
    changed = True
    while changed:
        changed = False
        edges = {(_find(parent, u), l, _find(parent, v)) for u, l, v in edges}
        out, inc = {}, {}
        for u, l, v in sorted(edges):
            for table, key, other in ((out, (u, l), v), (inc, (v, l), u)):
                prev = table.get(key)
                if prev is None:
                    table[key] = other
                    continue
                a, b = _find(parent, prev), _find(parent, other)
                if a != b:
                    parent[max(a, b)] = min(a, b)
                    changed = True
            if changed:
                break
    return edges


def _trim(edges: set, base) -> set:
    while True:
        degree = {}
        for u, _, v in edges:
            degree[u] = degree.get(u, 0) + 1
            degree[v] = degree.get(v, 0) + 1
        leaves = {x for x, d in degree.items() if d == 1 and x != base}
        if not leaves:
            return edges
        edges = {e for e in edges if e[0] not in leaves and e[2] not in leaves}


def _canonical(edges: set, base, ambient_rank: int) -> CoreGraph:
    adj = {}
    for u, l, v in edges:
        adj.setdefault(u, []).append((l, v))
        adj.setdefault(v, []).append((-l, u))
    order = {base: 0}
    # BFS tree paths give the free basis
    path = {base: ()}
    queue = deque([base])
    while queue:
        u = queue.popleft()
        for l, v in sorted(adj.get(u, []), key=lambda t: (abs(t[0]), t[0] < 0)):
            if v not in order:
                order[v] = len(order)
                path[v] = path[u] + (l,)
                queue.append(v)
    new_edges = sorted((order[u], l, order[v]) for u, l, v in edges)
    tree = set()
    for v, p in path.items():
        if p:
            tree.add(p)
    basis = []
    for u, l, v in sorted(edges, key=lambda e: (order[e[0]], e[1], order[e[2]])):
        if path[v] == path[u] + (l,) or path[u] == path[v] + (-l,):
            continue
        basis.append(multiply(path[u], (l,), invert(path[v])))
    return CoreGraph(len(order), tuple(new_edges), ambient_rank, tuple(basis))


def fold_core_graph(generators: Sequence[Sequence[int]], ambient_rank: int) -> CoreGraph:
    """Stallings core graph of the subgroup generated by ``generators``.

    >>> g = fold_core_graph([(1,), (2, 1, -2), (2, 2)], 2)
    >>> (g.n_vertices, g.rank, g.index)
    (2, 3, 2)
    """
    for w in generators:
        if max_letter(w) > ambient_rank:
            raise InputError(f"generator {w} uses letters beyond rank {ambient_rank}")
    counter = itertools.count(1)
    edges = set()
    for w in generators:
        w = reduce_word(w)
        if not w:
            continue
        prev = 0
        for k, x in enumerate(w):
            nxt = 0 if k == len(w) - 1 else next(counter)
            edges.add((prev, x, nxt) if x > 0 else (nxt, -x, prev))
            prev = nxt
    parent = {v: v for e in edges for v in (e[0], e[2])}
    parent.setdefault(0, 0)
    edges = _fold(edges, parent)
    edges = _trim(edges, _find(parent, 0))
    return _canonical(edges, _find(parent, 0), ambient_rank)


def find_relation(generators: Sequence[Sequence[int]], max_length: int = 8, budget: int = 200_000):
    """Shortest nontrivial relation among ``generators``, if one is found.

    Returns a word in the generator symbols (1-based, signed) whose image is
    trivial, or None when the bounded search finds nothing.
    """
    gens = [reduce_word(w) for w in generators]
    for i, w in enumerate(gens):
        if not w:
            return ((i + 1),)
    k = len(gens)
    symbols = [s for i in range(1, k + 1) for s in (i, -i)]
    frontier = [((), ())]
    seen = 0
    for _ in range(max_length):
        nxt = []
        for sym_word, value in frontier:
            for s in symbols:
                if sym_word and sym_word[-1] == -s:
                    continue
                image = gens[s - 1] if s > 0 else invert(gens[-s - 1])
                val = multiply(value, image)
                cand = sym_word + (s,)
                if not val:
                    return cand
                nxt.append((cand, val))
                seen += 1
                if seen > budget:
                    return None
        frontier = nxt
    return None
