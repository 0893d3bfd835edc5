"""Covering maps between surface models and the decision tables built on them."""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Callable

from .errors import InputError, UnsupportedError
from .folding import find_relation, fold_core_graph
from .model import (
    INF,
    EndSpec,
    Named,
    PieceGraph,
    build_named,
    classify_named,
    end_spec_of,
    genus_class,
    surface_json,
    RADIUS_SCHEDULE,
    type_of,
)
from .surfaces import FiniteSurface, cover_type, mod_n_hom
from .words import format_word, reduce_word

CHARACTERISTIC_TYPES = frozenset({Named.PLANE, Named.FLUTE, Named.LOCH_NESS, Named.SPOTTED_LOCH_NESS})


# -- graph covers ------------------------------------------------------------


@dataclass
class GraphCoverMap:
    """A cellular map ``total -> base`` given vertex by vertex.

    ``vertex_map(v)`` is the image of ``v``; ``slot_map(v, s)`` is the base
    slot that edge slot ``s`` at ``v`` maps to.
    """

    total: PieceGraph
    base: PieceGraph
    vertex_map: Callable
    slot_map: Callable = lambda v, s: s

    def materialize(self, radius: int) -> dict:
        return {v: self.vertex_map(v) for v in self.total.ball(radius)}


class CoveringTree(PieceGraph):
    """Universal cover of a piece graph: non-backtracking slot paths from the root."""

    is_tree = True

    def __init__(self, base: PieceGraph):
        super().__init__()
        self.base = base
        self.root = ()
        self.may_have_punctures = base.may_have_punctures
        self._proj = {(): base.root}

    def project(self, w: tuple):
        hit = self._proj.get(w)
        if hit is not None:
            return hit
        u = self.project(w[:-1]) if len(w) > 1 else self.base.root
        v = self.base.neighbor(u, w[-1])
        self._proj[w] = v
        return v

    def _back(self, w):
        if not w:
            return None
        parent = self.project(w[:-1])
        return self.base.reverse_slot(parent, w[-1])

    def degree(self, w):
        return self.base.degree(self.project(w))

    def neighbor(self, w, slot):
        if slot == self._back(w):
            return w[:-1]
        return w + (slot,)

    def reverse_slot(self, w, slot):
        if slot == self._back(w):
            return w[-1]
        return self.base.reverse_slot(self.project(w), slot)

    def depth(self, w):
        return len(w)

    def piece_genus(self, w):
        return self.base.piece_genus(self.project(w))

    def punctures(self, w):
        return self.base.punctures(self.project(w))

    def describe(self):
        return {"generator": "CoveringTree", "base": self.base.describe()}


def graph_universal_cover(base: PieceGraph) -> GraphCoverMap:
    """The tree of reduced edge-slot words over ``base``, mapped by evaluation."""
    tree = CoveringTree(base)
    return GraphCoverMap(tree, base, tree.project)


@dataclass
class CoverCheck:
    ok: bool
    violations: list = field(default_factory=list)
    checked: int = 0

    def to_dict(self) -> dict:
        return {"ok": self.ok, "checked": self.checked, "violations": self.violations[:20]}


def check_cover(m: GraphCoverMap, radius: int) -> CoverCheck:
    """Check local bijectivity and piece compatibility on every vertex of ball(radius)."""
    bad = []
    verts = m.total.ball(radius)
    for v in verts:
        b = m.vertex_map(v)
        if m.total.piece(v) != m.base.piece(b):
            bad.append({"vertex": repr(v), "problem": "piece",
                        "total": m.total.piece(v).to_dict(), "base": m.base.piece(b).to_dict()})
        deg = m.total.degree(v)
        if deg != m.base.degree(b):
            bad.append({"vertex": repr(v), "problem": "degree"})
            continue
        slots = [m.slot_map(v, s) for s in range(deg)]
        if sorted(slots) != list(range(deg)):
            bad.append({"vertex": repr(v), "problem": "star not bijective", "slots": slots})
            continue
        for s, t in enumerate(slots):
            u = m.total.neighbor(v, s)
            if m.vertex_map(u) != m.base.neighbor(b, t):
                bad.append({"vertex": repr(v), "problem": "edge", "slot": s})
    return CoverCheck(not bad, bad, len(verts))


# -- chain steps -------------------------------------------------------------


def model_json(x) -> dict:
    if isinstance(x, (FiniteSurface, Named)):
        return surface_json(x)
    if isinstance(x, tuple):
        genus, spec = x
        return {"genus": "inf" if genus == INF else genus, "ends": spec.to_dict()}
    if isinstance(x, PieceGraph):
        return x.describe()
    return {"repr": repr(x)}


@dataclass
class ChainStep:
    kind: str  # SubsurfaceCover | UniversalAbelian | GraphCover
    source: object
    target: object
    certificate: dict
    ok: bool

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "source": model_json(self.source),
            "target": model_json(self.target),
            "certificate": self.certificate,
            "ok": self.ok,
        }


@dataclass
class CoverChain:
    steps: list

    @property
    def composes(self) -> bool:
        return all(a.source == b.target for a, b in zip(self.steps, self.steps[1:]))

    @property
    def ok(self) -> bool:
        return self.composes and all(s.ok for s in self.steps)

    def to_dict(self) -> dict:
        return {"ok": self.ok, "composes": self.composes, "steps": [s.to_dict() for s in self.steps]}

    def to_dot(self) -> str:
        lines = ["digraph chain {", "  rankdir=LR;"]
        nodes = [self.steps[-1].source] + [s.target for s in reversed(self.steps)]
        for i, x in enumerate(nodes):
            lines.append(f'  n{i} [label="{_short(x)}"];')
        for i, step in enumerate(reversed(self.steps)):
            color = "black" if step.ok else "red"
            lines.append(f'  n{i} -> n{i + 1} [label="{step.kind}", color={color}];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _short(x) -> str:
    if isinstance(x, Named):
        return x.value
    if isinstance(x, FiniteSurface):
        return f"S(g={x.g},b={x.b},p={x.p})"
    if isinstance(x, tuple):
        return f"genus {x[0]}, {x[1]}"
    return type(x).__name__


def subsurface_cover(S: FiniteSurface, subgroup_gens, subsurface: FiniteSurface) -> ChainStep:
    """Cover of ``S`` for a subgroup carried by the subsurface ``subsurface``.

    The generators are folded to certify they freely generate a subgroup of
    the right rank; the cover is then the interior of the subsurface.
    """
    if S.is_closed:
        raise InputError("pi_1 of a closed surface is not free; pass a bordered subsurface")
    gens = [reduce_word(w) for w in subgroup_gens]
    if not gens:
        raise InputError("need at least one subgroup generator")
    core = fold_core_graph(gens, S.rank)
    if core.rank < len(gens):
        witness = find_relation(gens)
        raise InputError(
            f"generators do not freely generate: fold rank {core.rank} < {len(gens)}"
            + (f"; relation {witness}" if witness else "")
        )
    expected = subsurface.rank
    if core.rank != expected:
        raise InputError(f"fold rank {core.rank} does not match subsurface rank {expected}")
    cert = {
        "generators": [format_word(w, S.naming()) for w in gens],
        "fold_rank": core.rank,
        "index": None if core.index == INF else core.index,
        "free_basis_ok": core.rank == len(gens),
        "ambient": S.to_dict(),
    }
    return ChainStep("SubsurfaceCover", subsurface.interior(), S, cert, core.is_folded())


def pants_generators(S: FiniteSurface):
    """A deterministic essential pair of pants in ``S``.

    Returns ``(ambient, generators)``: when ``S`` has at least three
    peripherals it is bounded by two of them; otherwise it sits in the
    first handle, bounded by ``a1``, ``b1 a1^-1 b1^-1`` and their product.
    Closed surfaces use the one-holed torus around the first handle as
    the (bordered) ambient surface.
    """
    if not S.has_nonabelian_pi1:
        raise InputError(f"{S} has abelian fundamental group")
    if S.n_peripheral >= 3:
        c = 2 * S.g
        return S, [(c + 1,), (c + 2,)]
    ambient = S if not S.is_closed else FiniteSurface(1, 1, 0)
    return ambient, [(1,), (2, -1, -2)]


# -- universal abelian covers ------------------------------------------------


FINITE_NAMED = {
    Named.PLANE: FiniteSurface(0, 0, 1),
    Named.SPHERE: FiniteSurface(0),
    Named.ANNULUS: FiniteSurface(0, 0, 2),
    Named.TORUS: FiniteSurface(1),
}


def resolve_named(x):
    """Finite-type names as surfaces, infinite-type names as piece-graph models."""
    if not isinstance(x, Named):
        return x
    return build_named(x) if x.is_infinite_type else FINITE_NAMED[x]


def _as_type(x):
    if isinstance(x, FiniteSurface):
        return x
    if isinstance(x, Named):
        return x
    if isinstance(x, PieceGraph):
        if x.is_finite:
            raise InputError("finite piece graphs: pass the FiniteSurface instead")
        return x
    raise InputError(f"cannot classify {x!r}")


def classify_uac(S):
    """Universal abelian cover of a surface, as a named surface."""
    S = _as_type(S)
    if isinstance(S, Named):
        if S.is_infinite_type:
            return Named.LOCH_NESS
        S = FINITE_NAMED[S]
    if isinstance(S, PieceGraph):
        return Named.LOCH_NESS
    g, k = S.g, S.n_peripheral
    if g == 0 and k == 0:
        return Named.SPHERE
    if (g == 0 and k <= 2) or (g == 1 and k == 0):
        return Named.PLANE
    if g == 1 and k == 1:
        return Named.FLUTE
    if g >= 2 and k == 1:
        return Named.SPOTTED_LOCH_NESS
    return Named.LOCH_NESS


@dataclass
class UacEvidence:
    surface: FiniteSurface
    deck_rank: int
    covers: dict  # n -> CoverResult
    predicted: Named
    consistent: bool

    def to_dict(self) -> dict:
        return {
            "deck_rank": self.deck_rank,
            "predicted": self.predicted.value,
            "consistent": self.consistent,
            "covers": {str(n): r.to_dict() for n, r in sorted(self.covers.items())},
        }


def uac_approximation_evidence(S: FiniteSurface, n_list=(2, 3)) -> UacEvidence:
    """Mod-n homology covers as finite approximations of the universal abelian cover.

    Consistency: flute-type predictions need constant genus and peripherals
    that lift closed; spotted predictions need growing genus with closed
    lifts; Loch Ness predictions need growing genus, and for bordered
    surfaces peripherals of order above 1 (no punctures pile up).
    """
    if not S.has_nonabelian_pi1:
        raise InputError(f"{S} has abelian fundamental group")
    ns = sorted(set(n_list))
    covers = {n: cover_type(S, mod_n_hom(S, n)) for n in ns}
    predicted = classify_uac(S)
    genera = [covers[n].cover.g for n in ns]
    growing = all(a < b for a, b in zip(genera, genera[1:]))
    constant = len(set(genera)) == 1
    orders = {lift.order for n in ns for lift in covers[n].peripheral_lifts}
    if predicted is Named.FLUTE:
        ok = constant and orders == {1}
    elif predicted is Named.SPOTTED_LOCH_NESS:
        ok = growing and orders == {1}
    else:
        ok = growing and (S.is_closed or 1 not in orders)
    return UacEvidence(S, S.rank, covers, predicted, ok and len(ns) >= 2)


def _report_spec(G: PieceGraph):
    for r in RADIUS_SCHEDULE:
        report = end_spec_of(G, r)
        if report.stabilized:
            return report.spec
    return None


def classify_mod_n_cover_infinite(G: PieceGraph, n: int) -> Named:
    """Mod-n homology cover of an infinite-type surface.

    Spotted Loch Ness when the surface has isolated planar ends, Loch Ness
    otherwise; ``n`` only has to be at least 2.
    """
    if n < 2:
        raise InputError(f"modulus must be at least 2, got {n}")
    if G.is_finite:
        raise InputError("finite-type surface: use cover_type instead")
    spec = _report_spec(G)
    if spec is None:
        raise UnsupportedError("end space of the model did not stabilize")
    return Named.SPOTTED_LOCH_NESS if spec.has_isolated_planar else Named.LOCH_NESS


def characteristic_constraint(x) -> bool:
    """Whether ``x`` is one of the four possible characteristic-cover types."""
    return x in CHARACTERISTIC_TYPES


# -- embeddings in the blooming Cantor tree ----------------------------------


class _EndAddresses:
    """Ends as infinite binary words (0 = left, 1 = right), tested on prefixes."""

    def __init__(self, spec: EndSpec):
        self.spec = spec
        tag = spec.tag
        if tag in ("FinitePlanar", "FiniteMixed"):
            self.kind = "finite"
            self.count = spec.planar + spec.genus
            self.genus_from = spec.planar  # rays r_j with j >= planar carry genus
        elif tag.startswith("OmegaPlusOne"):
            self.kind = "omega"
        elif tag.startswith("Cantor"):
            self.kind = "cantor"
        else:
            raise InputError("the empty end space has nothing to embed")

    @staticmethod
    def _split(w):
        a = 0
        while a < len(w) and w[a] == 0:
            a += 1
        rest = w[a:]
        return a, all(x == 1 for x in rest), len(rest)

    def in_ends(self, w) -> bool:
        if self.kind == "cantor":
            return True
        a, tail_right, m = self._split(w)
        if not tail_right:
            return False
        if self.kind == "omega":
            return True
        # prefix of L^j R^inf for some j < count
        return a < self.count if m else a <= self.count - 1

    def in_genus_ends(self, w) -> bool:
        tag = self.spec.tag
        if tag == "CantorAllGenus":
            return True
        if tag == "OmegaPlusOneGenusLimit":
            return all(x == 0 for x in w)
        if self.kind == "finite" and self.spec.genus:
            a, tail_right, m = self._split(w)
            if not tail_right:
                return False
            top = self.count - 1
            return self.genus_from <= a <= top if m else a <= top
        return False


class BctRegion(PieceGraph):
    """Sub-surface of the blooming Cantor tree kept by a :class:`PieceSelection`.

    Vertices are binary addresses below the root piece. In the full tree
    slot 0 is the parent (the root curve at the root), slots 1 and 2 the
    left and right children, and slot 3 the torus part of the piece.
    """

    is_tree = True

    def __init__(self, ends: _EndAddresses, closed_summand: int = 0):
        super().__init__()
        self.ends = ends
        self.summand = closed_summand
        self.root = ()

    def keeps_x(self, w) -> bool:
        return self.ends.in_ends(w)

    def keeps_t(self, w) -> bool:
        return self.ends.in_genus_ends(w)

    def _slots(self, w):
        out = [w[:-1]] if w else []
        out += [w + (c,) for c in (0, 1) if self.keeps_x(w + (c,))]
        return out

    def degree(self, w):
        return len(self._slots(w))

    def neighbor(self, w, slot):
        return self._slots(w)[slot]

    def reverse_slot(self, w, slot):
        u = self._slots(w)[slot]
        if len(u) > len(w):
            return 0
        return self._slots(u).index(w)

    def depth(self, w):
        return len(w)

    def piece_genus(self, w):
        return (1 if self.keeps_t(w) else 0) + (self.summand if not w else 0)

    def deleted_rays(self, w):
        marks = [0] if not w else []
        marks += [1 + c for c in (0, 1) if not self.keeps_x(w + (c,))]
        if not self.keeps_t(w):
            marks.append(3)
        return tuple(marks)

    def describe(self):
        return {"generator": "BctTree", "ends": self.ends.spec.to_dict(), "closed_summand": self.summand}


@dataclass
class PieceSelection:
    genus: object
    spec: EndSpec
    region: BctRegion

    def selected(self, radius: int):
        verts = self.region.ball(radius)
        xs = set(verts)
        ts = {v for v in verts if self.region.keeps_t(v)}
        return xs, ts

    def ray_deletions(self, radius: int) -> list:
        return [(v, s) for v in self.region.ball(radius) for s in self.region.deleted_rays(v)]

    def classify(self):
        """(genus, end space) read back from the selected region."""
        for r in RADIUS_SCHEDULE:
            report = end_spec_of(self.region, r)
            if report.stabilized:
                return genus_class(self.region, r), report.spec
        return None

    def complement_report(self, radius: int) -> dict:
        """Complementary pieces touching ball(radius); none of them is a disc.

        Every deleted child slot cuts off an infinite subtree of genus-one
        pieces, the root curve cuts off the other half of the tree, and a
        removed torus part is a one-holed torus.
        """
        marks = self.ray_deletions(radius)
        kinds = {"subtree": 0, "root_side": 0, "torus": 0}
        for v, s in marks:
            kinds["torus" if s == 3 else "root_side" if s == 0 else "subtree"] += 1
        return {"radius": radius, "complementary": kinds, "discs": 0, "pi1_injective": True}

    def to_dot(self, radius: int) -> str:
        _, ts = self.selected(radius)
        return self.region.to_dot(radius, highlight=ts)

    def to_dict(self, radius: int = 3) -> dict:
        xs, ts = self.selected(radius)
        return {
            "genus": "inf" if self.genus == INF else self.genus,
            "ends": self.spec.to_dict(),
            "radius": radius,
            "selected_x": len(xs),
            "selected_t": len(ts),
            "ray_deletions": len(self.ray_deletions(radius)),
        }


def embed_in_bct(target_genus, spec: EndSpec, closed_summand: int = 0) -> PieceSelection:
    """Select the pieces of the blooming Cantor tree carrying a surface.

    A planar part is kept where its piece separates the root curve from
    some end of ``spec``; a torus part where it separates the root curve
    from an end accumulated by genus.
    """
    if target_genus not in (0, INF):
        raise InputError("target genus must be 0 or inf; use closed_summand for finite genus")
    if closed_summand < 0:
        raise InputError("closed_summand must be nonnegative")
    if spec.tag == "Empty":
        raise InputError("compact surfaces do not embed as noncompact subsurfaces")
    if (target_genus == INF) != spec.has_genus_ends:
        raise InputError(f"genus {target_genus} is not realizable with end space {spec}")
    region = BctRegion(_EndAddresses(spec), closed_summand)
    genus = target_genus if target_genus == INF else closed_summand
    return PieceSelection(genus, spec, region)


# -- everything-covers chains ------------------------------------------------


def _source_type(source):
    if isinstance(source, Named):
        genus, spec = type_of(source)
    elif isinstance(source, tuple) and len(source) == 2:
        genus, spec = source
    else:
        raise InputError(f"source must be a named surface or (genus, end space), got {source!r}")
    if spec.tag == "Empty":
        raise InputError("source must be noncompact")
    return genus, spec


@functools.lru_cache(maxsize=4)
def _graph_cover_certificate(radius: int) -> tuple:
    base = build_named(Named.LOCH_NESS)
    m = graph_universal_cover(base)
    check = check_cover(m, radius)
    total_name = classify_named(m.total)
    base_name = classify_named(base)
    ok = check.ok and total_name is Named.BLOOMING_CANTOR_TREE and base_name is Named.LOCH_NESS
    cert = {
        "check_cover": check.to_dict(),
        "total": surface_json(total_name),
        "base": surface_json(base_name),
        "radius": radius,
    }
    return cert, ok


def _target_pants_step(target):
    target = resolve_named(target)
    if isinstance(target, FiniteSurface):
        if not target.has_nonabelian_pi1:
            raise InputError(f"{target} has abelian fundamental group and is not covered by every noncompact surface")
        ambient, gens = pants_generators(target)
        step = subsurface_cover(ambient, gens, FiniteSurface(0, 3, 0))
        if ambient != target:
            step.certificate["embedded_in"] = target.to_dict()
        step.target = target
        return step
    if isinstance(target, PieceGraph):
        if target.is_finite:
            raise InputError("finite piece graphs: pass the FiniteSurface instead")
        piece = target.piece(target.root)
        if piece.n_peripheral < 3 and not piece.has_nonabelian_pi1:
            raise InputError("root piece has no essential pair of pants")
        ambient, gens = pants_generators(piece)
        step = subsurface_cover(ambient, gens, FiniteSurface(0, 3, 0))
        step.certificate["root_piece"] = piece.to_dict()
        step.target = target
        return step
    raise InputError(f"unsupported target {target!r}")


def everything_covers_chain(source, target, radius: int = 4) -> CoverChain:
    """Covering ``source -> BCT -> Loch Ness -> pants -> target`` with certificates."""
    genus, spec = _source_type(source)
    step1 = _target_pants_step(target)
    pants = step1.source

    evidence = uac_approximation_evidence(FiniteSurface(0, 3, 0), (2, 3))
    uac = classify_uac(pants)
    step2 = ChainStep(
        "UniversalAbelian",
        Named.LOCH_NESS,
        pants,
        {"classification": uac.value, "evidence": evidence.to_dict()},
        uac is Named.LOCH_NESS and evidence.consistent,
    )

    cert, ok = _graph_cover_certificate(radius)
    step3 = ChainStep("GraphCover", Named.BLOOMING_CANTOR_TREE, Named.LOCH_NESS, dict(cert), ok)

    selection = embed_in_bct(INF if genus == INF else 0, spec, 0 if genus == INF else int(genus))
    got = selection.classify()
    complement = selection.complement_report(radius)
    src = source if isinstance(source, Named) else (genus, spec)
    step4 = ChainStep(
        "SubsurfaceCover",
        src,
        Named.BLOOMING_CANTOR_TREE,
        {
            "selection": selection.to_dict(radius),
            "classified": None if got is None else model_json(got),
            "complement": complement,
        },
        got == (genus, spec) and complement["discs"] == 0,
    )
    return CoverChain([step1, step2, step3, step4])
