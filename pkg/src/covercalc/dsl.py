"""A small line-oriented request language.

One directive per line; ``#`` starts a comment::

    command classify-cover
    surface g=1 b=1 p=0
    hom mod-n 3

Directives: ``command``, ``surface``/``source``/``target`` (either
``g= b= p=`` or ``named=<name>``), ``hom`` (``mod-n <n>``,
``target=(Z/n)^k images: a1->(1,0), ...`` or
``target=S<d> images: a1->(0 1 2), ...``), ``group``, ``subgroup gens:``,
``aifn default=<int> vals: (<word>,<int>) ...`` (or the literal
``{default: 0, values: [(<word>, <int>), ...]}``), ``radius``, ``n``,
``rank``, ``factors``, ``classify`` and ``serre``. Words are whitespace
separated tokens such as ``a1 b1^-1 c2``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace

from .ends import group_text, parse_group
from .errors import InputError
from .model import Named

COMMANDS = ("classify-cover", "uac", "mod-n", "chain", "build", "ends", "ai", "tree", "fold")


class DslError(InputError):
    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line, self.column = line, column


@dataclass(frozen=True)
class SurfaceSpec:
    named: str | None = None
    g: int = 0
    b: int = 0
    p: int = 0

    def text(self) -> str:
        return f"named={self.named}" if self.named else f"g={self.g} b={self.b} p={self.p}"


@dataclass(frozen=True)
class HomSpec:
    kind: str  # mod-n | abelian | perm
    n: int = 0  # modulus (mod-n, abelian) or degree (perm)
    k: int = 0  # number of factors (abelian)
    images: tuple = ()  # ((generator name, image), ...)
    regular: bool = True

    def text(self) -> str:
        if self.kind == "mod-n":
            head = f"mod-n {self.n}"
        else:
            target = f"(Z/{self.n})^{self.k}" if self.kind == "abelian" else f"S{self.n}"
            parts = []
            for name, img in self.images:
                if self.kind == "abelian":
                    parts.append(f"{name}->(" + ",".join(map(str, img)) + ")")
                else:
                    parts.append(f"{name}->" + ("".join("(" + " ".join(map(str, c)) + ")" for c in img) or "()"))
            head = f"target={target} images: " + ", ".join(parts)
        return head if self.regular else head + " irregular"


@dataclass(frozen=True)
class AiSpec:
    default: int = 0
    values: tuple = ()  # ((word tokens, int), ...)


@dataclass(frozen=True)
class Request:
    command: str | None = None
    surface: SurfaceSpec | None = None
    source: SurfaceSpec | None = None
    target: SurfaceSpec | None = None
    hom: HomSpec | None = None
    group: str | None = None
    subgroup: tuple | None = None
    aifn: AiSpec | None = None
    radius: int | None = None
    n: tuple | None = None
    rank: int | None = None
    factors: str | None = None
    classify: tuple | None = None
    serre: tuple | None = None

    def to_dsl(self) -> str:
        lines = []
        if self.command:
            lines.append(f"command {self.command}")
        for key in ("surface", "source", "target"):
            spec = getattr(self, key)
            if spec is not None:
                lines.append(f"{key} {spec.text()}")
        if self.hom is not None:
            lines.append(f"hom {self.hom.text()}")
        if self.group is not None:
            lines.append(f"group {self.group}")
        if self.subgroup is not None:
            lines.append("subgroup gens: " + ", ".join(tokens_text(w) for w in self.subgroup))
        if self.aifn is not None:
            vals = " ".join(f"({tokens_text(w)},{v})" for w, v in self.aifn.values)
            lines.append(f"aifn default={self.aifn.default} vals: {vals}".rstrip())
        if self.radius is not None:
            lines.append(f"radius {self.radius}")
        if self.n is not None:
            lines.append("n " + " ".join(map(str, self.n)))
        if self.rank is not None:
            lines.append(f"rank {self.rank}")
        if self.factors is not None:
            lines.append(f"factors {self.factors}")
        if self.classify is not None:
            lines.append(f"classify {tokens_text(self.classify)}")
        if self.serre is not None:
            lines.append("serre " + ", ".join(tokens_text(w) for w in self.serre))
        return "\n".join(lines) + "\n"


def tokens_text(tokens) -> str:
    if not tokens:
        return "1"
    return " ".join(name if exp == 1 else f"{name}^{exp}" for name, exp in tokens)


# -- parsing -----------------------------------------------------------------

_WORD_TOKEN = re.compile(r"([A-Za-z]\d*)(?:\^(-?\d+))?$")
_INT = re.compile(r"-?\d+$")


class _Line:
    def __init__(self, number: int, text: str):
        self.number = number
        self.text = text

    def error(self, offset: int, message: str) -> DslError:
        return DslError(self.number, offset + 1, message)


def _word(line: _Line, text: str, offset: int) -> tuple:
    out = []
    for m in re.finditer(r"\S+", text):
        tok = m.group()
        if tok in ("1", "e"):
            continue
        t = _WORD_TOKEN.match(tok)
        if not t:
            raise line.error(offset + m.start(), f"expected a generator token like a1 or b1^-1, got {tok!r}")
        exp = int(t.group(2)) if t.group(2) is not None else 1
        if exp == 0:
            raise line.error(offset + m.start(), "exponent 0 is not allowed")
        out.append((t.group(1), exp))
    return tuple(out)


def _word_list(line: _Line, text: str, offset: int) -> tuple:
    out = []
    pos = 0
    for part in text.split(","):
        if not part.strip():
            raise line.error(offset + pos, "expected a word before ','")
        out.append(_word(line, part, offset + pos))
        pos += len(part) + 1
    return tuple(out)


def _int(line: _Line, text: str, offset: int, what: str) -> int:
    if not _INT.match(text):
        raise line.error(offset, f"expected an integer for {what}, got {text!r}")
    return int(text)


def _surface(line: _Line, rest: str, offset: int) -> SurfaceSpec:
    fields = {}
    for m in re.finditer(r"\S+", rest):
        tok = m.group()
        if "=" not in tok and tok in {n.value for n in Named}:
            tok = "named=" + tok  # bare name shorthand
        if "=" not in tok:
            raise line.error(offset + m.start(), f"expected key=value, got {tok!r}")
        key, _, val = tok.partition("=")
        if key in fields:
            raise line.error(offset + m.start(), f"duplicate key {key!r}")
        if key == "named":
            names = [n.value for n in Named]
            if val not in names:
                raise line.error(offset + m.start() + 6, f"expected one of {', '.join(names)}")
            fields[key] = val
        elif key in ("g", "b", "p"):
            v = _int(line, val, offset + m.start() + 2, key)
            if v < 0:
                raise line.error(offset + m.start() + 2, f"{key} must be nonnegative")
            fields[key] = v
        else:
            raise line.error(offset + m.start(), f"unknown key {key!r}; expected g, b, p or named")
    if "named" in fields:
        if len(fields) > 1:
            raise line.error(offset, "named= cannot be combined with g/b/p")
        return SurfaceSpec(named=fields["named"])
    return SurfaceSpec(None, fields.get("g", 0), fields.get("b", 0), fields.get("p", 0))


_ABELIAN_TARGET = re.compile(r"\(Z/(\d+)\)\^(\d+)$|Z/(\d+)$")
_PERM_TARGET = re.compile(r"S(\d+)$")


def _hom(line: _Line, rest: str, offset: int) -> HomSpec:
    regular = True
    stripped = rest.rstrip()
    if stripped.endswith(" irregular") or stripped == "irregular":
        regular = False
        rest = stripped[: -len("irregular")]
    m = re.match(r"\s*mod-n\s+(\S+)\s*$", rest)
    if m:
        n = _int(line, m.group(1), offset + m.start(1), "mod-n")
        return HomSpec("mod-n", n, regular=regular)
    m = re.match(r"\s*target=(\S+)\s+images:(.*)$", rest)
    if not m:
        raise line.error(offset, "expected 'mod-n <int>' or 'target=<group> images: ...'")
    target, images, img_off = m.group(1), m.group(2), offset + m.start(2)
    a = _ABELIAN_TARGET.match(target)
    p = _PERM_TARGET.match(target)
    if a:
        n = int(a.group(1) or a.group(3))
        k = int(a.group(2)) if a.group(2) else 1
        kind = "abelian"
    elif p:
        n, k, kind = int(p.group(1)), 0, "perm"
    else:
        raise line.error(offset + m.start(1), "expected target (Z/n)^k, Z/n or S<d>")
    out = []
    pos = 0
    for part in _split_images(images):
        start = images.index(part, pos)
        here = img_off + start + len(part) - len(part.lstrip())
        pos = start + len(part)
        if "->" not in part:
            raise line.error(here, "expected <generator>-><image>")
        name, _, img = part.partition("->")
        name = name.strip()
        if not _WORD_TOKEN.match(name) or "^" in name:
            raise line.error(here, f"bad generator name {name!r}")
        img = img.strip()
        if kind == "abelian":
            vm = re.fullmatch(r"\((-?\d+(?:\s*,\s*-?\d+)*)\)", img)
            if not vm:
                raise line.error(here, "expected a vector like (1,0)")
            vec = tuple(int(x) for x in vm.group(1).split(","))
            if len(vec) != k:
                raise line.error(here, f"expected {k} coordinates")
            out.append((name, vec))
        else:
            if not re.fullmatch(r"(\(\s*(\d+(\s+\d+)*)?\s*\))+", img):
                raise line.error(here, "expected cycles like (0 1 2)(3 4)")
            cyc = tuple(tuple(int(x) for x in c.split()) for c in re.findall(r"\(([^)]*)\)", img) if c.split())
            out.append((name, cyc))
    return HomSpec(kind, n, k, tuple(out), regular)


def _split_images(text: str) -> list:
    parts, depth, cur = [], 0, ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    if cur.strip():
        parts.append(cur)
    return [p for p in parts if p.strip()]


def _aifn(line: _Line, rest: str, offset: int) -> AiSpec:
    lit = re.match(r"\s*\{\s*default\s*:\s*(-?\d+)\s*,\s*values\s*:\s*\[(.*)\]\s*\}\s*$", rest)
    if lit:
        default, body, body_off = int(lit.group(1)), lit.group(2), offset + lit.start(2)
    else:
        m = re.match(r"\s*default=(\S+)\s+vals:(.*)$", rest)
        if not m:
            raise line.error(offset, "expected 'default=<int> vals: (<word>,<int>) ...' or a {default: .., values: [..]} literal")
        default = _int(line, m.group(1), offset + m.start(1), "default")
        body, body_off = m.group(2), offset + m.start(2)
    values = []
    end = 0
    for pm in re.finditer(r"\(([^(),]*),\s*(-?\d+)\s*\)", body):
        gap = body[end: pm.start()].strip(" ,")
        if gap:
            raise line.error(body_off + end, f"expected (<word>,<int>), got {gap!r}")
        values.append((_word(line, pm.group(1), body_off + pm.start(1)), int(pm.group(2))))
        end = pm.end()
    if body[end:].strip(" ,"):
        raise line.error(body_off + end, "expected (<word>,<int>)")
    return AiSpec(default, tuple(values))


def parse_dsl(text: str) -> Request:
    """Parse a request; errors carry line and column."""
    fields = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        line = _Line(number, raw)
        m = re.match(r"\s*(\S+)\s*", body)
        key, rest, offset = m.group(1), body[m.end():], m.end()
        if key in fields:
            raise line.error(m.start(1), f"duplicate directive {key!r}")
        if key == "command":
            if rest.strip() not in COMMANDS:
                raise line.error(offset, f"expected one of {', '.join(COMMANDS)}")
            fields[key] = rest.strip()
        elif key in ("surface", "source", "target"):
            fields[key] = _surface(line, rest, offset)
        elif key == "hom":
            fields[key] = _hom(line, rest, offset)
        elif key == "group":
            try:
                fields[key] = group_text(parse_group(rest.strip()))
            except InputError as e:
                raise line.error(offset, str(e)) from None
        elif key == "subgroup":
            sm = re.match(r"gens:(.*)$", rest)
            if not sm:
                raise line.error(offset, "expected 'gens: <word>, <word>, ...'")
            fields[key] = _word_list(line, sm.group(1), offset + sm.start(1))
        elif key == "aifn":
            fields[key] = _aifn(line, rest, offset)
        elif key in ("radius", "rank"):
            fields[key] = _int(line, rest.strip(), offset, key)
        elif key == "n":
            nums = list(re.finditer(r"\S+", rest))
            if not nums:
                raise line.error(offset, "expected at least one integer")
            fields[key] = tuple(_int(line, x.group(), offset + x.start(), "n") for x in nums)
        elif key == "factors":
            text_f = rest.strip()
            try:
                group_text(parse_group(text_f.replace(",", "*")))
            except InputError as e:
                raise line.error(offset, str(e)) from None
            fields[key] = text_f.replace(" ", "")
        elif key == "classify":
            fields[key] = _word(line, rest, offset)
        elif key == "serre":
            fields[key] = _word_list(line, rest, offset)
        else:
            raise line.error(m.start(1), f"unknown directive {key!r}")
    return Request(**fields)


def merge(base: Request, **overrides) -> Request:
    return replace(base, **{k: v for k, v in overrides.items() if v is not None})
