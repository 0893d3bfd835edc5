"""Command-line interface: ``covercalc <subcommand> [request-file | -] [flags]``.

Every flag is shorthand for one line of the request language (see
:mod:`covercalc.dsl`); flags override lines read from the request file.
Exit status is 0 on success, 2 on bad input and 3 when a resource bound
is hit.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import config
from .dsl import COMMANDS, HomSpec, Request, merge, parse_dsl
from .ends import (
    AiFunction,
    FreeProduct,
    almost_invariant_rank,
    boundary_of,
    cayley_ball,
    ends_estimate,
    is_coboundary,
    parse_group,
    swarup_kernel_test,
)
from .errors import InputError, ResourceError
from .folding import fold_core_graph
from .forge import (
    characteristic_constraint,
    classify_mod_n_cover_infinite,
    classify_uac,
    everything_covers_chain,
    resolve_named,
    uac_approximation_evidence,
)
from .model import INF, EndSpec, Named, build_named, classify_named, end_spec_of, genus_lower_bound, surface_json
from .quotient import Abelian, FiniteQuotientHom, Permutation
from .surfaces import FiniteSurface, cover_type, mod_n_hom
from .trees import FreeProductAction
from .words import Naming, format_word, max_letter, resolve_tokens

SCHEMA = "covercalc/1"


# -- resolving request pieces ------------------------------------------------


def _need(req: Request, name: str):
    value = getattr(req, name)
    if value is None:
        raise InputError(f"{req.command} needs a {name!r} line (or --{name} flag)")
    return value


def surface_of(spec):
    if spec.named:
        return Named(spec.named)
    return FiniteSurface(spec.g, spec.b, spec.p)


def hom_of(spec, S: FiniteSurface) -> FiniteQuotientHom:
    if spec.kind == "mod-n":
        return mod_n_hom(S, spec.n)
    naming = S.naming()
    images = {}
    for name, img in spec.images:
        idx = resolve_tokens([(name, 1)], naming)[0]
        if idx > S.rank:
            raise InputError(f"{name} is not a generator of {S} (rank {S.rank})")
        if idx in images:
            raise InputError(f"two images given for {name}")
        images[idx] = img
    missing = [naming.name(i) for i in range(1, S.rank + 1) if i not in images]
    if missing:
        raise InputError(f"rank mismatch: no image for {', '.join(missing)}")
    if spec.kind == "abelian":
        target = Abelian((spec.n,) * spec.k)
        imgs = tuple(images[i] for i in range(1, S.rank + 1))
    else:
        target = Permutation(spec.n)
        imgs = tuple(_perm_from_cycles(images[i], spec.n) for i in range(1, S.rank + 1))
    return FiniteQuotientHom(S.rank, target, imgs)


def _perm_from_cycles(cycles, degree: int) -> tuple:
    p = list(range(degree))
    seen = set()
    for c in cycles:
        for x in c:
            if not 0 <= x < degree or x in seen:
                raise InputError(f"bad cycle {c} for degree {degree}")
            seen.add(x)
        for a, b in zip(c, c[1:] + c[:1]):
            p[a] = b
    return tuple(p)


def _word_naming(group) -> Naming:
    return Naming("factors") if isinstance(group, FreeProduct) else Naming("free")


# -- subcommands -------------------------------------------------------------


def _cover(req: Request, hom_spec) -> tuple:
    S = surface_of(_need(req, "surface"))
    if isinstance(S, Named):
        if hom_spec.kind != "mod-n":
            raise InputError("infinite-type surfaces only support 'hom mod-n <n>'")
        if not S.is_infinite_type:
            raise InputError(f"{S.value}: give the surface as g= b= p=")
        name = classify_mod_n_cover_infinite(build_named(S), hom_spec.n)
        result = {"cover": surface_json(name), "characteristic": characteristic_constraint(name)}
        return result, f"mod-{hom_spec.n} cover of {S.value}: {name.value}", None
    res = cover_type(S, hom_of(hom_spec, S), regular=hom_spec.regular)
    c = res.cover
    text = f"degree {res.degree}: genus {c.g}, {c.b} boundary, {c.p} punctures"
    return res.to_dict(), text, None


def cmd_classify_cover(req):
    return _cover(req, _need(req, "hom"))


def cmd_mod_n(req):
    if req.hom is not None:
        return _cover(req, req.hom)
    n = _need(req, "n")
    return _cover(req, HomSpec("mod-n", n[0]))


def cmd_uac(req):
    S = surface_of(_need(req, "surface"))
    name = classify_uac(S)
    result = {"uac": surface_json(name)}
    if isinstance(S, FiniteSurface) and S.has_nonabelian_pi1:
        ev = uac_approximation_evidence(S, req.n or (2, 3))
        result["evidence"] = ev.to_dict()
    return result, f"universal abelian cover: {name.value}", None


def _source_of(spec):
    x = surface_of(spec)
    if isinstance(x, FiniteSurface):
        if x.b:
            raise InputError("source must be borderless")
        return (x.g, EndSpec.finite(x.p))
    return x


def cmd_chain(req):
    source = _source_of(_need(req, "source"))
    target = resolve_named(surface_of(_need(req, "target")))
    chain = everything_covers_chain(source, target, req.radius or 4)
    text = "\n".join(f"{i + 1}. {s.kind}: {'ok' if s.ok else 'FAILED'}" for i, s in enumerate(chain.steps))
    return chain.to_dict(), text, chain.to_dot()


def cmd_build(req):
    S = surface_of(_need(req, "surface"))
    if not isinstance(S, Named) or not S.is_infinite_type:
        raise InputError("build needs 'surface named=<flute|lnm|slnm|cantor|bct>'")
    R = req.radius or 3
    G = build_named(S)
    report = end_spec_of(G, R)
    name = classify_named(G, R)
    result = {
        "model": G.describe(),
        "radius": R,
        "ends": report.to_dict(),
        "genus_lower_bound": genus_lower_bound(G, R),
        "classification": surface_json(name),
    }
    return result, f"{S.value}: {report.spec}, classified as {_name_text(name)}", G.to_dot(R)


def _name_text(x) -> str:
    if isinstance(x, Named):
        return x.value
    if isinstance(x, FiniteSurface):
        return str(x)
    return f"unrecognized ({x.reason})"


def cmd_ends(req):
    G = parse_group(_need(req, "group"))
    R = req.radius or 3
    est = ends_estimate(G, R)
    result = {"group": G.describe(), **est.to_dict()}
    if est.stabilized:
        result["almost_invariant_rank"] = almost_invariant_rank(G, R).rank
    label = "diverging (infinitely many)" if est.divergent else str(est.count)
    dot = _graph_dot(cayley_ball(G, R), lambda g: format_word(G.geodesic(g), _word_naming(G)) if G.radial else str(g))
    return result, f"{G.describe()}: ends {label}, stabilized {est.stabilized}", dot


def _graph_dot(graph, label) -> str:
    ids = {v: i for i, v in enumerate(sorted(graph.nodes, key=repr))}
    lines = ["graph cayley {"]
    for v, i in ids.items():
        lines.append(f'  {i} [label="{label(v)}"];')
    for u, v in sorted((ids[a], ids[b]) for a, b in graph.edges):
        lines.append(f"  {min(u, v)} -- {max(u, v)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_ai(req):
    G = parse_group(_need(req, "group"))
    spec = _need(req, "aifn")
    naming = _word_naming(G)
    pairs = [(resolve_tokens(w, naming), v) for w, v in spec.values]
    x = AiFunction.from_words(G, pairs, spec.default, req.radius)
    bd = boundary_of(x)
    fmt = (lambda g: format_word(G.geodesic(g), naming)) if G.radial else repr
    result = {
        "group": G.describe(),
        "boundary": sorted(fmt(g) for g in bd),
        "coboundary": is_coboundary(x),
    }
    if req.subgroup is not None:
        H = [resolve_tokens(w, naming) for w in req.subgroup]
        R = max(x.radius, max((G.length(b) for b in bd), default=0)) + max(len(h) for h in H) + 2
        result["swarup"] = swarup_kernel_test(x, H, R).to_dict()
    text = f"boundary: {{{', '.join(result['boundary'])}}}"
    if "swarup" in result:
        text += f"\nkernel test: {'holds' if result['swarup']['holds'] else 'fails'}"
    return result, text, None


def cmd_tree(req):
    factors = _need(req, "factors")
    orders = parse_group(factors.replace(",", "*")).orders if "," in factors or "*" in factors else None
    if orders is None:
        raise InputError("tree needs at least two factors, e.g. --factors Z/2,Z/3")
    A = FreeProductAction(orders)
    R = req.radius or config.DEFAULT_TREE_RADIUS
    result = {"factors": A.group.describe()}
    lines = []
    dot = None
    if req.classify is not None:
        w = resolve_tokens(req.classify, A.naming)
        iso = A.classify_isometry(w)
        result["normal_form"] = A.format(A.normal_form(w))
        result["isometry"] = iso.to_dict()
        lines.append(f"{result['normal_form']}: {iso.kind}, translation length {iso.translation_length}")
        dot = A.to_dot(min(R, 3), w)
    if req.serre is not None:
        gens = [resolve_tokens(w, A.naming) for w in req.serre]
        res = A.serre_criterion(gens)
        result["serre"] = res.to_dict()
        lines.append(f"serre: {res.to_dict()['result']}")
    if not lines:
        raise InputError("tree needs a 'classify' or 'serre' line")
    return result, "\n".join(lines), dot


def cmd_fold(req):
    naming = Naming("free")
    gens = [resolve_tokens(w, naming) for w in _need(req, "subgroup")]
    rank = req.rank
    if rank is None and req.group is not None:
        G = parse_group(req.group)
        rank = getattr(G, "rank", None)
        if rank is None:
            raise InputError("fold works in free groups; use group F<r>")
    if rank is None:
        rank = max((max_letter(w) for w in gens), default=1)
    core = fold_core_graph(gens, rank)
    index = "infinite" if core.index == math.inf else str(core.index)
    text = f"rank {core.rank}, index {index}, {core.n_vertices} vertices"
    return core.to_dict(naming), text, core.to_dot(naming)


HANDLERS = {
    "classify-cover": cmd_classify_cover,
    "uac": cmd_uac,
    "mod-n": cmd_mod_n,
    "chain": cmd_chain,
    "build": cmd_build,
    "ends": cmd_ends,
    "ai": cmd_ai,
    "tree": cmd_tree,
    "fold": cmd_fold,
}


def run(req: Request, output: str = "json") -> str:
    """Execute a request and return the emitted document."""
    if req.command not in HANDLERS:
        raise InputError(f"unknown command {req.command!r}")
    result, text, dot = HANDLERS[req.command](req)
    if output == "json":
        doc = {"schema": SCHEMA, "command": req.command, "result": result}
        return json.dumps(doc, sort_keys=True, indent=2, default=_json_default) + "\n"
    if output == "dot":
        if dot is None:
            raise InputError(f"{req.command} has no DOT output")
        return dot
    return text + "\n"


def _json_default(x):
    if x == INF:
        return "inf"
    raise TypeError(f"not serializable: {x!r}")


# -- argument handling -------------------------------------------------------

_FLAG_LINES = {
    "surface": "surface",
    "source": "source",
    "target": "target",
    "hom": "hom",
    "group": "group",
    "aifn": "aifn",
    "radius": "radius",
    "rank": "rank",
    "factors": "factors",
    "classify": "classify",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="covercalc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    helps = {
        "classify-cover": "topological type of the cover given by a homomorphism",
        "uac": "universal abelian cover, with mod-n evidence",
        "mod-n": "mod-n homology cover",
        "chain": "certified cover chain from a noncompact surface to a target",
        "build": "piece-graph model of a named infinite-type surface",
        "ends": "ends of a group from Cayley balls",
        "ai": "boundary and coset tests for an almost-invariant function",
        "tree": "isometries of a free product on its Bass-Serre tree",
        "fold": "Stallings core graph of a subgroup of a free group",
    }
    for name in COMMANDS:
        p = sub.add_parser(name, help=helps[name])
        p.add_argument("input", nargs="?", help="request file, or - for stdin")
        p.add_argument("--output", choices=("json", "dot", "text"), default="json")
        p.add_argument("--max-ball", type=int, help="bound on materialized ball sizes")
        p.add_argument("--radius", help="truncation radius")
        if name in ("classify-cover", "uac", "mod-n", "build"):
            p.add_argument("--surface", help='e.g. "g=1 b=1 p=0" or "named=flute"')
        if name == "classify-cover":
            p.add_argument("--mod-n", dest="mod_n", help="shorthand for --hom 'mod-n N'")
            p.add_argument("--hom", help='e.g. "target=(Z/2)^2 images: a1->(1,0), b1->(0,1)"')
        if name in ("uac", "mod-n"):
            p.add_argument("--n", help="modulus, or space-separated moduli")
        if name == "chain":
            p.add_argument("--source", help='e.g. "named=flute"')
            p.add_argument("--target", help='e.g. "g=0 b=0 p=3"')
        if name in ("ends", "ai", "fold"):
            p.add_argument("--group", help="Z, Z2, F2, Z/5, Z/2*Z/3, ...")
        if name == "ai":
            p.add_argument("--aifn", help='e.g. "default=0 vals: (b,1)"')
        if name in ("ai", "fold"):
            p.add_argument("--subgroup", help="comma-separated words")
        if name == "fold":
            p.add_argument("--rank", help="rank of the ambient free group")
        if name == "tree":
            p.add_argument("--factors", help="e.g. Z/2,Z/3")
            p.add_argument("--classify", help='word, e.g. "s t"')
            p.add_argument("--serre", help="comma-separated generator words")
    return parser


def request_from_args(args) -> Request:
    text = ""
    if args.input == "-":
        text = sys.stdin.read()
    elif args.input:
        try:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as e:
            raise InputError(f"cannot read {args.input}: {e}") from None
    base = parse_dsl(text)
    if base.command and base.command != args.command:
        raise InputError(f"request file is for {base.command!r}, not {args.command!r}")
    lines = []
    for attr, key in _FLAG_LINES.items():
        value = getattr(args, attr, None)
        if value is not None:
            lines.append(f"{key} {value}")
    if getattr(args, "mod_n", None) is not None:
        lines.append(f"hom mod-n {args.mod_n}")
    if getattr(args, "n", None) is not None:
        lines.append(f"n {args.n}")
    if getattr(args, "subgroup", None) is not None:
        lines.append(f"subgroup gens: {args.subgroup}")
    if getattr(args, "serre", None) is not None:
        lines.append(f"serre {args.serre}")
    flags = parse_dsl("\n".join(lines))
    merged = merge(base, **{k: getattr(flags, k) for k in flags.__dataclass_fields__})
    return merge(merged, command=args.command)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config.set_max_ball(args.max_ball)
    try:
        req = request_from_args(args)
        sys.stdout.write(run(req, args.output))
        return 0
    except ResourceError as e:
        print(f"covercalc: resource bound exceeded: {e}", file=sys.stderr)
        return 3
    except InputError as e:
        print(f"covercalc: {e}", file=sys.stderr)
        return 2
    finally:
        config.set_max_ball(None)


if __name__ == "__main__":
    sys.exit(main())
